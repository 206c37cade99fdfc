"""Frequency-uniform solutions of -u'' + q(x) u = omega^2 u.

Solutions are represented through the Fourier-Laguerre expansion of a
transmutation kernel.  The coefficients do not depend on omega and the
truncation error is bounded uniformly in real omega.

Typical use::

    import numpy as np
    from laguerre_schrodinger import (PotentialProfile, build_particular_basis,
                                      coefficients_recurrent, evaluate_solution,
                                      make_uniform_grid)

    grid = make_uniform_grid(1.0, 5001)
    q = PotentialProfile.from_callable(grid, lambda x: 1 + 0 * x)
    coeffs = coefficients_recurrent(build_particular_basis(q), 1000)
    u = evaluate_solution(coeffs, omega=250.0)
"""

__version__ = "0.1.0"

from .coefficients import CoefficientTable, coefficients_direct, coefficients_recurrent
from .errors import (
    ConvergenceError,
    DomainError,
    GridError,
    NonFiniteError,
    ParseError,
    PoleError,
    SchrodingerError,
    VanishingDenominatorError,
)
from .expr import PotentialExpr, parse_potential
from .grid import Grid, SampledFunction, cumulative_integral, make_uniform_grid, pointwise
from .laguerre import gauss_laguerre, laguerre_eval
from .oracles import OracleSolution, constant_q_solution, rk_solution
from .representation import (
    KernelSlice,
    SolutionEvaluation,
    coefficient_decay,
    evaluate_solution,
    evaluate_sweep,
    kernel_moment,
    kernel_slice,
    shifted_solve,
    sum_rule_residual,
    uniform_error_bound,
)
from .spps import (
    FormalPowers,
    ParticularBasis,
    PotentialProfile,
    build_formal_powers,
    build_particular_basis,
    recursive_integrals,
    spps_solution,
    spps_tail,
)

__all__ = [
    "CoefficientTable", "ConvergenceError", "DomainError", "FormalPowers", "Grid", "GridError",
    "KernelSlice", "NonFiniteError", "OracleSolution", "ParseError", "ParticularBasis", "PoleError",
    "PotentialExpr", "PotentialProfile", "SampledFunction", "SchrodingerError", "SolutionEvaluation",
    "VanishingDenominatorError", "build_formal_powers", "build_particular_basis",
    "coefficient_decay", "coefficients_direct", "coefficients_recurrent", "constant_q_solution",
    "cumulative_integral", "evaluate_solution", "evaluate_sweep", "gauss_laguerre",
    "kernel_moment", "kernel_slice", "laguerre_eval", "make_uniform_grid", "parse_potential",
    "pointwise", "recursive_integrals", "rk_solution", "shifted_solve", "spps_solution",
    "spps_tail", "sum_rule_residual", "uniform_error_bound",
]
