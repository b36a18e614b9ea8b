"""One-dimensional finite-volume laboratory for adaptive-order central
WENO reconstructions and their hierarchic competitors."""

from .grid import BoundaryCondition, Grid, StateField, apply_boundary, build_grid
from .physics import (Euler, LinearAdvection, RadialEuler, char_basis,
                      cons_to_prim, euler_flux, euler_max_speed,
                      prim_to_cons, radial_source)
from .polykernel import (Polynomial, StencilSpec, evaluate,
                         interpolate_from_averages, smoothness_indicator)
from .reconstruct import (CandidateSet, ReconstructionConfig, counters,
                          cweno_blend, cwenoz_ao_blend, cwenoz_blend, cwz753,
                          cwz753_config, make_kernel, validate_parameters,
                          weno_ao753)
from .solver import (GAUSS4, RK7_TABLEAU, Quadrature, RKTableau,
                     SemidiscreteSystem, SolverConfig, cell_average_init,
                     llf_flux, rk_step, semidiscrete_rhs, stable_dt)
from .harness import (PROBLEMS, ProblemSpec, RunReport, SimulationBlowup,
                      convergence_study, error_norms, init_problem,
                      reconstruction_accuracy_study, reference_solution,
                      run_simulation, timing_study)

__version__ = "0.1.0"
