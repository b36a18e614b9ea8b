"""Uniform 1D grids, per-cell state storage and ghost-cell boundary filling."""

from dataclasses import dataclass, field

import numpy as np

VALID_BC_KINDS = ("periodic", "free_flow", "reflecting_wall")


@dataclass(frozen=True)
class Grid:
    """Uniform grid of n_cells cells covering [x_left, x_right].

    Cell i occupies [x_left + i*dx, x_left + (i+1)*dx]; centers sit at
    x_left + (i + 1/2)*dx.
    """

    x_left: float
    x_right: float
    n_cells: int

    @property
    def dx(self):
        return (self.x_right - self.x_left) / self.n_cells

    def centers(self):
        return self.x_left + (np.arange(self.n_cells) + 0.5) * self.dx

    def center(self, i):
        return self.x_left + (i + 0.5) * self.dx

    def edges(self):
        return self.x_left + np.arange(self.n_cells + 1) * self.dx


def build_grid(x_left, x_right, n_cells):
    """Build a uniform grid; rejects empty intervals and n_cells < 1."""
    if n_cells < 1:
        raise ValueError(f"n_cells must be positive, got {n_cells}")
    if not x_right > x_left:
        raise ValueError(f"empty interval [{x_left}, {x_right}]")
    return Grid(float(x_left), float(x_right), int(n_cells))


@dataclass(frozen=True)
class BoundaryCondition:
    """Boundary treatment per domain side.

    `kind` applies to both ends; pass `right` for mixed setups such as a
    reflecting wall on the left with free outflow on the right.  Periodic
    conditions must be periodic on both sides.
    """

    kind: str
    right: str = ""

    def __post_init__(self):
        right = self.right or self.kind
        object.__setattr__(self, "right", right)
        for k in (self.kind, self.right):
            if k not in VALID_BC_KINDS:
                raise ValueError(f"unknown boundary kind {k!r}")
        if ("periodic" in (self.kind, self.right)) and self.kind != self.right:
            raise ValueError("periodic boundaries must apply to both sides")

    @property
    def left(self):
        return self.kind


PERIODIC = BoundaryCondition("periodic")
FREE_FLOW = BoundaryCondition("free_flow")


@dataclass
class StateField:
    """Per-cell, per-component cell averages plus ghost cells.

    values has shape (n_cells + 2*ghost_width, n_comp); the interior block
    is values[ghost_width : ghost_width + n_cells].
    """

    grid: Grid
    n_comp: int
    ghost_width: int
    values: np.ndarray = field(default=None)

    def __post_init__(self):
        n_tot = self.grid.n_cells + 2 * self.ghost_width
        if self.values is None:
            self.values = np.zeros((n_tot, self.n_comp))
        else:
            self.values = np.asarray(self.values, dtype=float)
            if self.values.ndim == 1:
                self.values = self.values[:, None]
            if self.values.shape != (n_tot, self.n_comp):
                raise ValueError(
                    f"values shape {self.values.shape} does not match "
                    f"({n_tot}, {self.n_comp})")

    @property
    def interior(self):
        gw = self.ghost_width
        return self.values[gw:gw + self.grid.n_cells]

    def copy(self):
        return StateField(self.grid, self.n_comp, self.ghost_width,
                          self.values.copy())

    @classmethod
    def from_interior(cls, grid, interior, ghost_width):
        interior = np.asarray(interior, dtype=float)
        if interior.ndim == 1:
            interior = interior[:, None]
        f = cls(grid, interior.shape[1], ghost_width)
        f.interior[:] = interior
        return f


def apply_boundary(f, bc, momentum_comp=None):
    """Fill the ghost cells of `f` according to `bc`; interior untouched.

    periodic copies wrap the interior around, free_flow extends the nearest
    interior cell, reflecting_wall mirrors the interior about the wall and
    negates the momentum component (momentum_comp must name it).
    Returns the field for chaining.
    """
    gw = f.ghost_width
    if gw == 0:
        return f
    n = f.grid.n_cells
    if gw > n:
        raise ValueError("ghost_width exceeds number of interior cells")
    u = f.values
    interior = f.interior

    for side in ("left", "right"):
        kind = bc.left if side == "left" else bc.right
        if kind == "periodic":
            if side == "left":
                u[:gw] = interior[n - gw:]
            else:
                u[gw + n:] = interior[:gw]
        elif kind == "free_flow":
            if side == "left":
                u[:gw] = interior[0]
            else:
                u[gw + n:] = interior[-1]
        elif kind == "reflecting_wall":
            if momentum_comp is None:
                raise ValueError(
                    "reflecting_wall requires a model with a momentum component")
            if side == "left":
                block = interior[:gw][::-1].copy()
                block[:, momentum_comp] *= -1.0
                u[:gw] = block
            else:
                block = interior[n - gw:][::-1].copy()
                block[:, momentum_comp] *= -1.0
                u[gw + n:] = block
    return f
