"""Benchmark harness: problem definitions, simulation driver, accuracy /
convergence / timing studies and their CSV reports."""

import os
import time
import warnings
from dataclasses import dataclass, field, fields

import numpy as np

from .grid import BoundaryCondition, build_grid
from .physics import Euler, LinearAdvection, RadialEuler, prim_to_cons
from .reconstruct import counters, cwz753, make_kernel
from .solver import (GAUSS4, RK7_TABLEAU, SemidiscreteSystem, SolverConfig,
                     cell_average_init, rk_step, stable_dt)


class SimulationBlowup(RuntimeError):
    """Non-finite state detected; carries the first offending cell/step."""

    def __init__(self, step, t, cell, comp):
        self.step, self.t, self.cell, self.comp = step, t, cell, comp
        super().__init__(
            f"non-finite value in cell {cell}, component {comp} "
            f"after step {step} (t = {t:.6g})")


# ------------------------------------------------------------- problems


def jiang_shu_profile(x):
    """Gaussian / square / triangle / half-ellipse composite profile."""
    x = np.asarray(x, dtype=float)
    a, z, delta, alpha = 0.5, -0.7, 0.005, 10.0
    beta = np.log(2.0) / (36.0 * delta * delta)

    def gauss(center):
        return np.exp(-beta * (x - center) ** 2)

    def ellipse(center):
        return np.sqrt(np.maximum(1.0 - alpha ** 2 * (x - center) ** 2, 0.0))

    out = np.zeros_like(x)
    m = (x >= -0.8) & (x <= -0.6)
    out[m] = ((gauss(z - delta) + gauss(z + delta) + 4.0 * gauss(z)) / 6.0)[m]
    m = (x >= -0.4) & (x <= -0.2)
    out[m] = 1.0
    m = (x >= 0.0) & (x <= 0.2)
    out[m] = (1.0 - np.abs(10.0 * (x - 0.1)))[m]
    m = (x >= 0.4) & (x <= 0.6)
    out[m] = ((ellipse(a - delta) + ellipse(a + delta)
               + 4.0 * ellipse(a)) / 6.0)[m]
    return out


def _shu_osher_init(x):
    x = np.asarray(x, dtype=float)
    left = prim_to_cons(3.857143, 2.629369, 10.333333)
    rho = 1.0 + 0.2 * np.sin(5.0 * x)
    right = prim_to_cons(rho, np.zeros_like(x), np.ones_like(x))
    return np.where((x < -4.0)[:, None], left, right)


def _lax_init(x):
    x = np.asarray(x, dtype=float)
    left = prim_to_cons(0.445, 0.6989, 3.5277)
    right = prim_to_cons(0.5, 0.0, 0.571)
    return np.where((x < 0.5)[:, None], left, right)


def _sod_init(x):
    x = np.asarray(x, dtype=float)
    left = prim_to_cons(1.0, 0.0, 1.0)
    right = prim_to_cons(0.125, 0.0, 0.1)
    return np.where((x < 0.5)[:, None], left, right)


ACCURACY_FUNCTIONS = {
    # critical-point order, profile, critical point
    "u0": (0, lambda x: np.exp(-x * x), 0.2),
    "u1": (1, lambda x: np.sin(np.pi * x - np.sin(np.pi * x) / np.pi),
           0.596683186911209),
    "u2": (2, lambda x: 1.0 + np.sin(np.pi * x) ** 3, 0.0),
}


@dataclass(frozen=True)
class ProblemSpec:
    """One benchmark problem: domain, horizon, boundaries, model, CFL."""

    id: str
    x_left: float = 0.0
    x_right: float = 1.0
    final_time: float = 0.0
    bc: BoundaryCondition = BoundaryCondition("periodic")
    model: str = "advection"
    cfl: float = 0.9
    char_projection: bool = False
    startup_steps: int = 0
    startup_factor: float = 1.0

    def make_model(self):
        if self.model == "advection":
            return LinearAdvection()
        if self.model == "euler":
            return Euler()
        if self.model == "euler_radial":
            return RadialEuler(d=3)
        raise ValueError(f"unknown model {self.model!r}")

    def initial_profile(self):
        if self.id in ("jiang_shu",):
            return jiang_shu_profile
        if self.id == "smooth_advection":
            return lambda x: np.sin(np.pi * np.asarray(x))
        if self.id == "shu_osher":
            return _shu_osher_init
        if self.id == "lax":
            return _lax_init
        if self.id == "sod_spherical":
            return _sod_init
        if self.id in ACCURACY_FUNCTIONS:
            return ACCURACY_FUNCTIONS[self.id][1]
        raise ValueError(f"unknown problem id {self.id!r}")

    def exact_final(self):
        """Pointwise exact solution at final_time, or None."""
        if self.model != "advection":
            return None
        period = self.x_right - self.x_left
        shift = self.final_time % period
        profile = self.initial_profile()

        def moved(x):
            x = np.asarray(x, dtype=float)
            y = self.x_left + np.mod(x - shift - self.x_left, period)
            return profile(y)

        return moved


PROBLEMS = {
    "jiang_shu": ProblemSpec("jiang_shu", -1.0, 1.0, 8.0,
                             BoundaryCondition("periodic"), "advection", 0.9),
    "smooth_advection": ProblemSpec("smooth_advection", -1.0, 1.0, 2.0,
                                    BoundaryCondition("periodic"),
                                    "advection", 0.9),
    "shu_osher": ProblemSpec("shu_osher", -5.0, 5.0, 1.8,
                             BoundaryCondition("free_flow"), "euler", 0.75,
                             char_projection=True),
    "lax": ProblemSpec("lax", 0.0, 1.0, 0.15,
                       BoundaryCondition("free_flow"), "euler", 0.9,
                       char_projection=True),
    "sod_spherical": ProblemSpec("sod_spherical", 0.0, 1.0, 0.5,
                                 BoundaryCondition("reflecting_wall",
                                                   "free_flow"),
                                 "euler_radial", 0.9, char_projection=True,
                                 startup_steps=10, startup_factor=0.2),
    "accuracy_u0": ProblemSpec("accuracy_u0"),
    "accuracy_u1": ProblemSpec("accuracy_u1"),
    "accuracy_u2": ProblemSpec("accuracy_u2"),
}


def init_problem(spec, grid):
    """Cell averages of the problem's initial data via 4-node Gauss."""
    profile = spec.initial_profile()
    return cell_average_init(profile, grid)


def problem_to_config(spec):
    """Serialize a ProblemSpec to the INI config format."""
    import configparser
    import io
    ini = configparser.ConfigParser()
    bc = spec.bc.kind if spec.bc.kind == spec.bc.right \
        else f"{spec.bc.kind},{spec.bc.right}"
    ini["problem"] = {
        "id": spec.id,
        "x_left": repr(spec.x_left),
        "x_right": repr(spec.x_right),
        "final_time": repr(spec.final_time),
        "bc": bc,
        "model": spec.model,
        "cfl": repr(spec.cfl),
        "char_projection": str(spec.char_projection).lower(),
        "startup_steps": str(spec.startup_steps),
        "startup_factor": repr(spec.startup_factor),
    }
    buf = io.StringIO()
    ini.write(buf)
    return buf.getvalue()


def problem_from_config(text):
    """Inverse of problem_to_config."""
    import configparser
    ini = configparser.ConfigParser()
    ini.read_string(text)
    sec = ini["problem"]
    kinds = sec["bc"].split(",")
    bc = BoundaryCondition(kinds[0], kinds[1] if len(kinds) > 1 else "")
    return ProblemSpec(
        id=sec["id"],
        x_left=float(sec["x_left"]),
        x_right=float(sec["x_right"]),
        final_time=float(sec["final_time"]),
        bc=bc,
        model=sec["model"],
        cfl=float(sec["cfl"]),
        char_projection=sec.getboolean("char_projection"),
        startup_steps=int(sec["startup_steps"]),
        startup_factor=float(sec["startup_factor"]),
    )


# -------------------------------------------------------------- reporting


@dataclass
class RunReport:
    """Metrics of one experiment; unused fields stay at their defaults."""

    problem: str = ""
    scheme: str = ""
    cells: list = field(default_factory=list)
    dx: list = field(default_factory=list)
    errors_l1: list = field(default_factory=list)
    errors_linf: list = field(default_factory=list)
    rates_l1: list = field(default_factory=list)
    rates_linf: list = field(default_factory=list)
    overshoot: float = 0.0
    undershoot: float = 0.0
    total_variation: float = 0.0
    fallback_events: int = 0
    steps: int = 0
    wall_seconds: dict = field(default_factory=dict)
    overhead_pct: dict = field(default_factory=dict)
    weight_sets_per_cell_stage: dict = field(default_factory=dict)
    indicators_per_cell_stage: dict = field(default_factory=dict)

    def terminal_rate(self, norm="l1"):
        rates = self.rates_l1 if norm == "l1" else self.rates_linf
        valid = [r for r in rates if r is not None]
        if not valid:
            raise ValueError("no refinement pair above the error floor")
        return valid[-1]

    def convergence_csv(self):
        lines = ["dx,error_L1,rate_L1,error_Linf,rate_Linf"]
        for k in range(len(self.dx)):
            r1 = self.rates_l1[k]
            ri = self.rates_linf[k]
            lines.append(",".join([
                f"{self.dx[k]:.12g}",
                f"{self.errors_l1[k]:.12e}",
                "" if r1 is None else f"{r1:.4f}",
                f"{self.errors_linf[k]:.12e}",
                "" if ri is None else f"{ri:.4f}",
            ]))
        return "\n".join(lines) + "\n"

    def timing_csv(self):
        lines = ["scheme,cells,median_seconds,overhead_pct"]
        for (scheme, n), sec in sorted(self.wall_seconds.items()):
            pct = self.overhead_pct.get((scheme, n), 0.0)
            lines.append(f"{scheme},{n},{sec:.6f},{pct:.2f}")
        return "\n".join(lines) + "\n"


ERROR_FLOOR = 1e-12  # double precision stands in for extended precision


def dyadic_rates(errors, floor=ERROR_FLOOR):
    """log2 ratios for dyadic refinement; None when the coarser error of a
    pair has dropped below the round-off floor (first entry is always None).
    """
    rates = [None]
    for coarse, fine in zip(errors[:-1], errors[1:]):
        if coarse > floor and fine > 0:
            rates.append(float(np.log2(coarse / fine)))
        else:
            rates.append(None)
    return rates


def error_norms(numeric, reference):
    """(L1, Linf) of the difference of two fields on the same grid."""
    if numeric.grid != reference.grid:
        raise ValueError("error norms need matching grids")
    diff = np.abs(numeric.interior - reference.interior)
    l1 = float(numeric.grid.dx * diff.sum())
    linf = float(diff.max())
    return l1, linf


# ------------------------------------------------------------- simulation


def solver_config_for(spec, scheme="cwz753", cfl=None, mhat=None, ell=None,
                      rexp=None, char_projection=None):
    return SolverConfig(
        cfl=spec.cfl if cfl is None else cfl,
        final_time=spec.final_time,
        scheme=scheme,
        mhat=mhat, ell=ell, rexp=rexp,
        char_projection=(spec.char_projection if char_projection is None
                         else char_projection),
        bc=spec.bc,
        startup_steps=spec.startup_steps,
        startup_factor=spec.startup_factor)


def run_simulation(spec, grid, config, initial=None):
    """Integrate to the final time; returns (field, RunReport).

    Aborts with SimulationBlowup naming the first non-finite cell and the
    step at which it appeared.
    """
    model = spec.make_model()
    system = SemidiscreteSystem(grid, model, config)
    f = init_problem(spec, grid) if initial is None else initial
    u = f.interior.copy()
    u0_min, u0_max = float(u.min()), float(u.max())

    before = counters.snapshot()
    t = 0.0
    steps = 0
    t_start = time.perf_counter()
    while t < config.final_time - 1e-14:
        dt = stable_dt(u, model, config.cfl_at(steps), grid.dx,
                       remaining=config.final_time - t)
        u = rk_step(u, dt, system, RK7_TABLEAU)
        t += dt
        steps += 1
        if not np.isfinite(u).all():
            cell, comp = np.argwhere(~np.isfinite(u))[0]
            raise SimulationBlowup(steps, t, int(cell), int(comp))
    wall = time.perf_counter() - t_start
    after = counters.snapshot()

    out = system.new_field(u)
    report = RunReport(problem=spec.id, scheme=config.scheme,
                       cells=[grid.n_cells], dx=[grid.dx])
    report.steps = steps
    report.fallback_events = system.fallback_cells
    report.overshoot = max(0.0, float(u.max()) - u0_max)
    report.undershoot = max(0.0, u0_min - float(u.min()))
    report.total_variation = float(
        np.abs(np.diff(u, axis=0)).sum())
    report.wall_seconds[(config.scheme, grid.n_cells)] = wall
    # one scalar reconstruction per component, cell and stage
    denom = grid.n_cells * max(system.rhs_evals, 1) * model.n_comp
    report.weight_sets_per_cell_stage[(config.scheme, grid.n_cells)] = \
        (after["weight_sets"] - before["weight_sets"]) / denom
    report.indicators_per_cell_stage[(config.scheme, grid.n_cells)] = \
        (after["indicator_evals"] - before["indicator_evals"]) / denom
    return out, report


def solution_csv(f):
    """Plot-ready dump: x_center,comp0[,comp1,comp2]."""
    centers = f.grid.centers()
    comps = f.interior
    header = "x_center," + ",".join(f"comp{c}" for c in range(f.n_comp))
    lines = [header]
    for i in range(f.grid.n_cells):
        vals = ",".join(f"{v:.12e}" for v in comps[i])
        lines.append(f"{centers[i]:.12g},{vals}")
    return "\n".join(lines) + "\n"


# --------------------------------------------------------------- studies


def reconstruction_accuracy_study(function_id, params=(4, 2, 1),
                                  refinements=range(2, 10)):
    """Pointwise reconstruction error at a critical point under dyadic
    refinement.

    The reconstruction cell is placed off-center around the critical point
    (45/55 split) to avoid parity superconvergence; the stencil averages
    come from the 4-node Gauss rule, and errors below the double-precision
    floor are excluded from the rates.
    """
    if function_id not in ACCURACY_FUNCTIONS:
        raise ValueError(f"unknown accuracy function {function_id!r}")
    _, fn, x_crit = ACCURACY_FUNCTIONS[function_id]
    mhat, ell, rexp = params
    from .reconstruct import cwz753_config
    cfg = cwz753_config(mhat=mhat, ell=ell, r=rexp)

    report = RunReport(problem=f"accuracy_{function_id}", scheme="cwz753")
    errors = []
    for j in refinements:
        dx = 2.0 ** (-j)
        xc = x_crit + 0.05 * dx  # cell [x-0.45dx, x+0.55dx]
        centers = xc + np.arange(-3, 4) * dx
        avgs = GAUSS4.cell_average(fn, centers, dx)[:, 0]
        p = cwz753(avgs, cfg, dx)
        xi = (x_crit - xc) / dx
        err = abs(p(xi) - fn(x_crit))
        errors.append(err)
        report.dx.append(dx)
        report.cells.append(j)
    report.errors_l1 = errors
    report.errors_linf = list(errors)
    report.rates_l1 = dyadic_rates(errors)
    report.rates_linf = list(report.rates_l1)
    return report


def convergence_study(spec, grids, config_kwargs=None):
    """Grid-refinement study against the exact solution (advection) or a
    fine-grid reference; grids must refine dyadically."""
    grids = list(grids)
    if len(grids) < 2:
        raise ValueError("need at least two grids")
    for a, b in zip(grids[:-1], grids[1:]):
        if b != 2 * a:
            raise ValueError("grids must be dyadic (each double the last)")
    kw = dict(config_kwargs or {})
    scheme = kw.pop("scheme", "cwz753")

    exact = spec.exact_final()
    ref_field = None
    if exact is None:
        ref_field = reference_solution(spec, n_ref=max(grids) * 20)

    report = RunReport(problem=spec.id, scheme=scheme)
    for n in grids:
        grid = build_grid(spec.x_left, spec.x_right, n)
        config = solver_config_for(spec, scheme=scheme, **kw)
        out, rep = run_simulation(spec, grid, config)
        if exact is not None:
            ref = cell_average_init(exact, grid)
        else:
            ref = project_field(ref_field, n)
        l1, linf = error_norms(out, ref)
        report.cells.append(n)
        report.dx.append(grid.dx)
        report.errors_l1.append(l1)
        report.errors_linf.append(linf)
        report.fallback_events += rep.fallback_events
    report.rates_l1 = dyadic_rates(report.errors_l1)
    report.rates_linf = dyadic_rates(report.errors_linf)
    return report


def project_field(fine, n_coarse):
    """Exact aggregation of fine cell averages onto a coarser grid."""
    from .grid import StateField
    n_fine = fine.grid.n_cells
    if n_fine % n_coarse:
        raise ValueError(f"{n_fine} fine cells not a multiple of {n_coarse}")
    ratio = n_fine // n_coarse
    coarse_grid = build_grid(fine.grid.x_left, fine.grid.x_right, n_coarse)
    vals = fine.interior.reshape(n_coarse, ratio, fine.n_comp).mean(axis=1)
    return StateField.from_interior(coarse_grid, vals, fine.ghost_width)


REFERENCE_SCHEME = "cweno3"
_REF_CACHE_DIR = os.environ.get("AOFV_CACHE", ".aofv_cache")


def reference_solution(spec, n_ref, use_cache=True):
    """Fine-grid reference field computed with the third-order central
    scheme; cached on disk keyed by problem and resolution."""
    os.makedirs(_REF_CACHE_DIR, exist_ok=True)
    path = os.path.join(_REF_CACHE_DIR, f"{spec.id}_{n_ref}.npy")
    grid = build_grid(spec.x_left, spec.x_right, n_ref)
    if use_cache and os.path.exists(path):
        vals = np.load(path)
        from .grid import StateField
        return StateField.from_interior(grid, vals, 3)
    config = solver_config_for(spec, scheme=REFERENCE_SCHEME,
                               char_projection=False)
    out, _ = run_simulation(spec, grid, config)
    if use_cache:
        np.save(path, out.interior)
    return out


def timing_study(spec, grids, schemes, repeats=5, scheme_kwargs=None):
    """Median wall-clock over `repeats` runs per scheme and grid, plus the
    percentage overhead of each scheme relative to the first one.

    One untimed warm-up run precedes the timed ones; run-to-run spread
    beyond 10% of the median only warns.  Meant for single-threaded use.
    """
    report = RunReport(problem=spec.id, scheme=",".join(schemes))
    kw = dict(scheme_kwargs or {})
    for n in grids:
        grid = build_grid(spec.x_left, spec.x_right, n)
        for scheme in schemes:
            config = solver_config_for(spec, scheme=scheme, **kw)
            before = counters.snapshot()
            out, rep = run_simulation(spec, grid, config)  # warm-up
            report.weight_sets_per_cell_stage[(scheme, n)] = \
                rep.weight_sets_per_cell_stage[(scheme, n)]
            report.indicators_per_cell_stage[(scheme, n)] = \
                rep.indicators_per_cell_stage[(scheme, n)]
            times = []
            for _ in range(repeats):
                _, rep = run_simulation(spec, grid, config)
                times.append(rep.wall_seconds[(scheme, n)])
            med = float(np.median(times))
            if max(times) - min(times) > 0.10 * med:
                warnings.warn(
                    f"timing spread for {scheme} at N={n} exceeds 10% "
                    f"of the median", RuntimeWarning)
            report.cells.append(n)
            report.wall_seconds[(scheme, n)] = med
        base = report.wall_seconds[(schemes[0], n)]
        for scheme in schemes:
            report.overhead_pct[(scheme, n)] = \
                100.0 * (report.wall_seconds[(scheme, n)] / base - 1.0)
    return report
