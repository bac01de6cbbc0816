"""Split fourth-order (Navier) plate solvers, relaxed Dirichlet problems and
relaxed shape optimization on uniform grids.

Nodal arrays have shape (ny, nx); row j holds the nodes at y = y0 + j * hy.
"""

from ._core import (
    Error,
    Grid,
    InvalidArgument,
    Quadratic2,
    Quartic2,
    SolverError,
    check_formulation_ii,
    compose,
    ellipticity_margin,
    evaluate_J,
    factor_quartic,
    fit_constant_mu,
    free_mask,
    gradient_J,
    nosol_instance,
    optimize,
    perforate,
    solve,
    solve_navier,
    solve_relaxed_system,
)

__all__ = [
    "Error",
    "Grid",
    "InvalidArgument",
    "Quadratic2",
    "Quartic2",
    "SolverError",
    "check_formulation_ii",
    "compose",
    "ellipticity_margin",
    "evaluate_J",
    "factor_quartic",
    "fit_constant_mu",
    "free_mask",
    "gradient_J",
    "nosol_instance",
    "optimize",
    "perforate",
    "solve",
    "solve_navier",
    "solve_relaxed_system",
]
