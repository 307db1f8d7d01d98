"""Numerical calculus for demi-distributions: nonlinear, locally controlled functionals on test-function spaces."""
from .quadrature import QuadratureConfig, QuadratureError
from .testfn import (
    COMPACT_UNION,
    SCHWARTZ,
    CompactA,
    TestFunction,
    derivative,
    evaluate,
    gaussian,
    integrate,
    make_bump,
    make_plateau,
    make_test_function,
    seminorm,
)
from .demidist import (
    ABS,
    EXP_ABS_MINUS_ONE,
    SIN,
    SIN_ABS,
    DemiDistribution,
    Neighborhood,
    SpanElement,
    abs_regular,
    apply,
    check_demi_linearity,
    compose,
    dirac,
    dirac_derivative,
    exp_abs,
    regular,
    sin_abs,
)
from .calculus import (
    DiffOperator,
    derivative_functional,
    estimate_support,
    general_solution,
    multiply,
    solve_homogeneous,
    solve_inhomogeneous,
)
from .fourier import fourier_functional, fourier_test, inverse_fourier_test
from .convolution import CompactRegular, Dirac, DiracDerivative, convolve_functional, convolve_test, mollifier

__version__ = "0.1.0"

__all__ = [
    "QuadratureConfig",
    "QuadratureError",
    "COMPACT_UNION",
    "SCHWARTZ",
    "CompactA",
    "TestFunction",
    "derivative",
    "evaluate",
    "gaussian",
    "integrate",
    "make_bump",
    "make_plateau",
    "make_test_function",
    "seminorm",
    "ABS",
    "EXP_ABS_MINUS_ONE",
    "SIN",
    "SIN_ABS",
    "DemiDistribution",
    "Neighborhood",
    "SpanElement",
    "abs_regular",
    "apply",
    "check_demi_linearity",
    "compose",
    "dirac",
    "dirac_derivative",
    "exp_abs",
    "regular",
    "sin_abs",
    "DiffOperator",
    "derivative_functional",
    "estimate_support",
    "general_solution",
    "multiply",
    "solve_homogeneous",
    "solve_inhomogeneous",
    "fourier_functional",
    "fourier_test",
    "inverse_fourier_test",
    "CompactRegular",
    "Dirac",
    "DiracDerivative",
    "convolve_functional",
    "convolve_test",
    "mollifier",
]
