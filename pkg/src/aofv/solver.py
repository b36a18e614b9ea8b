"""Method-of-lines semi-discretization: local Lax-Friedrichs fluxes,
reconstruction-driven interface states, geometric source quadrature, CFL
time steps and the nine-stage seventh-order explicit Runge-Kutta update."""

from dataclasses import dataclass, field

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from . import _rk7_coeffs
from .grid import BoundaryCondition, StateField, apply_boundary
from .reconstruct import make_kernel


@dataclass(frozen=True)
class RKTableau:
    """Explicit Butcher tableau; abscissae derived from the row sums."""

    a: np.ndarray
    b: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.a, dtype=float)
        b = np.asarray(self.b, dtype=float)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        if a.shape != (self.stages, self.stages):
            raise ValueError("tableau matrix must be square")
        if np.any(np.abs(np.triu(a)) > 0):
            raise ValueError("tableau must be strictly lower triangular")
        if abs(b.sum() - 1.0) > 1e-13:
            raise ValueError("output weights must sum to 1")

    @property
    def stages(self):
        return len(self.b)

    @property
    def c(self):
        return self.a.sum(axis=1)


RK7_TABLEAU = RKTableau(np.array(_rk7_coeffs.A), np.array(_rk7_coeffs.B))


# ------------------------------------------------------------- quadrature


@dataclass(frozen=True)
class Quadrature:
    """Gauss-Legendre rule mapped to cells; 4 nodes integrate degree <= 7
    exactly.  Nodes are stored on the scaled cell [-1/2, 1/2]."""

    npoints: int = 4
    nodes: np.ndarray = field(default=None)
    weights: np.ndarray = field(default=None)

    def __post_init__(self):
        x, w = np.polynomial.legendre.leggauss(self.npoints)
        object.__setattr__(self, "nodes", 0.5 * x)
        object.__setattr__(self, "weights", 0.5 * w)  # weights sum to 1

    def cell_average(self, fn, centers, dx):
        """Average of fn over each cell [c - dx/2, c + dx/2]."""
        centers = np.asarray(centers, dtype=float)
        pts = centers[:, None] + dx * self.nodes[None, :]
        vals = np.asarray(fn(pts.ravel()), dtype=float)
        if vals.ndim == 1:
            vals = vals[:, None]
        vals = vals.reshape(len(centers), self.npoints, -1)
        return np.einsum("q,nqc->nc", self.weights, vals)


GAUSS4 = Quadrature(4)


def cell_average_init(fn, grid, ghost_width=3):
    """StateField whose interior holds 4-node Gauss averages of fn."""
    avg = GAUSS4.cell_average(fn, grid.centers(), grid.dx)
    return StateField.from_interior(grid, avg, ghost_width)


# ------------------------------------------------------------ numerical flux


def llf_flux(u_left, u_right, model):
    """Local Lax-Friedrichs (Rusanov) flux; consistent: llf(u, u) = f(u)."""
    u_left = np.asarray(u_left, dtype=float)
    u_right = np.asarray(u_right, dtype=float)
    alpha = np.maximum(model.max_speed(u_left), model.max_speed(u_right))
    return 0.5 * (model.flux(u_left) + model.flux(u_right)) \
        - 0.5 * alpha[..., None] * (u_right - u_left)


# ------------------------------------------------------------ solver config


@dataclass
class SolverConfig:
    """Run parameters: time stepping, scheme selection and boundaries."""

    cfl: float = 0.9
    final_time: float = 0.0
    scheme: str = "cwz753"
    mhat: int = None
    ell: int = None
    rexp: int = None
    char_projection: bool = False
    bc: BoundaryCondition = field(default_factory=lambda: BoundaryCondition("periodic"))
    # shrink the first few steps; raw jump data can otherwise drive internal
    # Runge-Kutta stages out of the admissible set before the shock smears
    startup_steps: int = 0
    startup_factor: float = 1.0

    def __post_init__(self):
        if not 0 < self.cfl <= 1:
            raise ValueError("cfl must lie in (0, 1]")
        if self.final_time < 0:
            raise ValueError("final_time must be nonnegative")
        if not 0 < self.startup_factor <= 1:
            raise ValueError("startup_factor must lie in (0, 1]")

    def cfl_at(self, step):
        if step < self.startup_steps:
            return self.cfl * self.startup_factor
        return self.cfl

    def kernel_for(self, dx):
        return make_kernel(self.scheme, dx, mhat=self.mhat, ell=self.ell,
                           r=self.rexp)


# --------------------------------------------------------------- RHS driver


class SemidiscreteSystem:
    """Evaluates d/dt of the interior cell averages for one grid + scheme.

    Carries the precomputed reconstruction kernel, evaluation matrices and
    fallback statistics for a whole run; the heavy per-stage work is fully
    vectorized over cells.
    """

    def __init__(self, grid, model, config):
        self.grid = grid
        self.model = model
        self.config = config
        self.kernel = config.kernel_for(grid.dx)
        self.ghost_width = max(self.kernel.ghost_width, 1)
        # interfaces always; interior Gauss nodes only for source terms
        if model.has_source:
            self.eval_xi = np.concatenate([[-0.5, 0.5], GAUSS4.nodes])
        else:
            self.eval_xi = np.array([-0.5, 0.5])
        self.eval_mat = self.kernel.eval_matrix(self.eval_xi)
        self.fallback_cells = 0
        self.rhs_evals = 0

    def new_field(self, interior):
        return StateField.from_interior(self.grid, interior, self.ghost_width)

    def point_values(self, f):
        """Reconstruct every interior cell and evaluate at self.eval_xi.

        Returns (n_cells, n_points, n_comp).  Cells whose reconstructed
        states are not admissible fall back to their constant average.
        """
        model, kernel = self.model, self.kernel
        apply_boundary(f, self.config.bc, model.momentum_comp)
        gw, n = self.ghost_width, self.grid.n_cells
        w = sliding_window_view(f.values, kernel.stencil_width, axis=0)
        w = w[gw - kernel.ghost_width:][:n]  # (n, n_comp, width)
        interior = f.interior

        n_pts = len(self.eval_xi)
        n_comp = model.n_comp
        if self.config.char_projection and n_comp > 1:
            # project the stencil averages into the local eigenbasis of the
            # central cell average and reconstruct the characteristic
            # fields as one flattened scalar batch
            left, right = model.char_basis(interior)
            wc = np.matmul(w.transpose(0, 2, 1), left.transpose(0, 2, 1))
            batch = wc.transpose(2, 0, 1).reshape(n_comp * n, -1)
            flat = kernel.reconstruct_values(np.ascontiguousarray(batch),
                                             self.eval_mat)
            vals_c = flat.reshape(n_comp, n, n_pts)
            vals = np.matmul(vals_c.transpose(1, 2, 0),
                             right.transpose(0, 2, 1))
        else:
            batch = w.transpose(1, 0, 2).reshape(n_comp * n, -1)
            flat = kernel.reconstruct_values(np.ascontiguousarray(batch),
                                             self.eval_mat)
            vals = flat.reshape(n_comp, n, n_pts)
            vals = np.ascontiguousarray(vals.transpose(1, 2, 0))

        if model.n_comp > 1:
            ok = self.model.admissible(vals).all(axis=1)
            if not ok.all():
                bad = ~ok
                vals[bad] = interior[bad][:, None, :]
                self.fallback_cells += int(bad.sum())
        return vals

    def __call__(self, interior):
        """RHS of the semi-discrete system for interior averages (n, c)."""
        self.rhs_evals += 1
        model, grid = self.model, self.grid
        n, dx = grid.n_cells, grid.dx
        f = self.new_field(interior)
        vals = self.point_values(f)
        left_vals, right_vals = vals[:, 0, :], vals[:, 1, :]

        # interface states: u_minus from the cell on the left, u_plus from
        # the right; boundary closures depend on the bc kind
        u_minus = np.empty((n + 1, model.n_comp))
        u_plus = np.empty((n + 1, model.n_comp))
        u_minus[1:] = right_vals
        u_plus[:n] = left_vals
        bc = self.config.bc
        if bc.left == "periodic":
            u_minus[0] = right_vals[-1]
        elif bc.left == "free_flow":
            u_minus[0] = f.interior[0]
        else:  # reflecting wall: mirror the inner trace
            u_minus[0] = left_vals[0]
            u_minus[0, model.momentum_comp] *= -1.0
        if bc.right == "periodic":
            u_plus[n] = left_vals[0]
        elif bc.right == "free_flow":
            u_plus[n] = f.interior[-1]
        else:
            u_plus[n] = right_vals[-1]
            u_plus[n, model.momentum_comp] *= -1.0

        flux = llf_flux(u_minus, u_plus, model)
        if bc.left == "periodic":
            flux[n] = flux[0]
        rhs = -(flux[1:] - flux[:-1]) / dx

        if model.has_source:
            centers = grid.centers()
            pts = centers[:, None] + dx * GAUSS4.nodes[None, :]
            src = model.source(vals[:, 2:, :], pts)
            rhs = rhs + np.einsum("q,nqc->nc", GAUSS4.weights, src)
        return rhs


def semidiscrete_rhs(f, config, model):
    """One-shot RHS evaluation of a ghosted field (convenience wrapper)."""
    system = SemidiscreteSystem(f.grid, model, config)
    return system(f.interior.copy())


# ---------------------------------------------------------------- stepping


def rk_step(interior, dt, rhs, tableau=RK7_TABLEAU):
    """One explicit Runge-Kutta step on the interior average array."""
    a, b = tableau.a, tableau.b
    s = tableau.stages
    k = []
    for i in range(s):
        y = interior
        for j in range(i):
            if a[i, j] != 0.0:
                y = y + (dt * a[i, j]) * k[j]
        k.append(rhs(y))
    out = interior.copy()
    for i in range(s):
        if b[i] != 0.0:
            out += (dt * b[i]) * k[i]
    return out


def stable_dt(interior, model, cfl, dx, remaining=None):
    """CFL time step from the fastest wave; clamped to the remaining time."""
    speed = float(np.max(model.max_speed(interior)))
    if speed <= 0.0:
        if remaining is None:
            raise ValueError("zero wave speed and no remaining time given")
        return remaining
    dt = cfl * dx / speed
    if remaining is not None:
        dt = min(dt, remaining)
    return dt
