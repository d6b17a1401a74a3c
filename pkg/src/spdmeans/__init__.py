"""Means of probability measures on the cone of SPD matrices.

A numpy/scipy library for generalized operator means: induced means at a
parameter t in (0, 1], their t -> 0 net limit (the generalized Karcher
mean), matrix power means, the Thompson part metric with explicit
contraction factors, operator monotone kernel families with representing
measures on [0, 1], log-determinant divergences and a Riemannian
gradient-descent minimizer that independently cross-checks the fixed-point
route.
"""

from .core import (
    SpectralDecomposition,
    apply_scalar_fn,
    congruence,
    geometric_mean,
    loewner_leq,
    matrix_from_json,
    matrix_to_json,
    spd_matrix,
    spd_power,
    spectral,
    sym_matrix,
    weighted_arith,
    weighted_harm,
)
from .divergence import (
    RgdConfig,
    geodesic_convexity_check,
    logdet_divergence,
    minimize_divergence,
    objective,
    riemannian_gradient,
)
from .errors import (
    DomainError,
    EmptyInput,
    Incomparable,
    MeasureError,
    MonotonicityViolation,
    NonConvergence,
    NotPositiveDefinite,
    NumericalFailure,
    ShapeError,
    SingularTransform,
    SpdMeansError,
)
from .measures import (
    PMeasure,
    congruence_measure,
    integrate,
    measure_leq,
    pmeasure_from_json,
    pmeasure_to_json,
    product_measure,
)
from .monotone import (
    SMeasure,
    check_normalization,
    eval_mean,
    eval_monotone,
    harmonic_kernel,
    log_kernel,
    log_kernel_inv,
    mean_kernel,
    mean_kernel_inv,
    smeasure_from_json,
    smeasure_to_json,
    transpose_measure,
)
from .solver import (
    SolverConfig,
    SolverReport,
    induced_mean,
    iteration_map,
    karcher_residual,
    lambda_mean,
    power_mean,
    sandwich_check,
)
from .thompson import (
    contraction_factor_affine,
    contraction_factor_mean,
    contraction_factor_uniform,
    distance,
    min_scaling,
)

__version__ = "0.1.0"

__all__ = [
    "SpectralDecomposition", "apply_scalar_fn", "congruence", "geometric_mean",
    "loewner_leq", "matrix_from_json", "matrix_to_json", "spd_matrix",
    "spd_power", "spectral", "sym_matrix", "weighted_arith", "weighted_harm",
    "RgdConfig", "geodesic_convexity_check", "logdet_divergence",
    "minimize_divergence", "objective", "riemannian_gradient",
    "DomainError", "EmptyInput", "Incomparable", "MeasureError",
    "MonotonicityViolation", "NonConvergence", "NotPositiveDefinite",
    "NumericalFailure", "ShapeError", "SingularTransform", "SpdMeansError",
    "PMeasure", "congruence_measure", "integrate", "measure_leq",
    "pmeasure_from_json", "pmeasure_to_json", "product_measure",
    "SMeasure", "check_normalization", "eval_mean", "eval_monotone",
    "harmonic_kernel", "log_kernel", "log_kernel_inv", "mean_kernel",
    "mean_kernel_inv", "smeasure_from_json", "smeasure_to_json",
    "transpose_measure",
    "SolverConfig", "SolverReport", "induced_mean", "iteration_map",
    "karcher_residual", "lambda_mean", "power_mean", "sandwich_check",
    "contraction_factor_affine", "contraction_factor_mean",
    "contraction_factor_uniform", "distance", "min_scaling",
]
