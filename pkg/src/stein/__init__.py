from .normal import (
    QuadratureError,
    normal_functional,
    normal_cdf,
    normal_quantile,
    hermite_projection,
)
from .solver import (
    DerivativeInstabilityError,
    SteinSolution,
    LipschitzCheck,
    ProjectionCheck,
    solve_stein,
    solve_on_grid,
    stein_derivative,
    stein_residual,
    derivative_lipschitz_check,
    expansion_constants,
    hermite_projection_check,
)
from .testfunctions import TestFunction, LIBRARY, family, get_test_function, as_test_function
from .expansion import ExpansionResidual, expansion_residual

__all__ = [
    "QuadratureError",
    "normal_functional",
    "normal_cdf",
    "normal_quantile",
    "hermite_projection",
    "DerivativeInstabilityError",
    "SteinSolution",
    "LipschitzCheck",
    "ProjectionCheck",
    "solve_stein",
    "solve_on_grid",
    "stein_derivative",
    "stein_residual",
    "derivative_lipschitz_check",
    "expansion_constants",
    "hermite_projection_check",
    "TestFunction",
    "LIBRARY",
    "family",
    "get_test_function",
    "as_test_function",
    "ExpansionResidual",
    "expansion_residual",
]
