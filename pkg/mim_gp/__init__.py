"""Gaussian-process core: kernels, numerical contracts, ordinary kriging."""

from .errors import (
    ActiveLearningError,
    CoordinateCollision,
    DegenerateData,
    DimensionMismatch,
    NotPositiveDefinite,
    NumericalError,
    PointInDesign,
    ZeroVariance,
)
from .kernels import (
    KernelFamily,
    KernelSpec,
    correlation_matrix,
    correlation_vector,
    cross_correlation,
    eval_kernel,
)
from .kriging import (
    FitOptions,
    GPModel,
    batch_predict,
    concentrated_nll,
    fit,
    fit_fixed,
    predict,
    variance_reduction,
)
from .model_io import load_model, save_model
from .numeric import (
    BoxOptimizerConfig,
    CholeskyFactor,
    cholesky,
    maximize_box,
    norm_cdf,
    norm_pdf,
    solve_spd,
)

__all__ = [
    "ActiveLearningError",
    "BoxOptimizerConfig",
    "CholeskyFactor",
    "CoordinateCollision",
    "DegenerateData",
    "DimensionMismatch",
    "FitOptions",
    "GPModel",
    "KernelFamily",
    "KernelSpec",
    "NotPositiveDefinite",
    "NumericalError",
    "PointInDesign",
    "ZeroVariance",
    "batch_predict",
    "cholesky",
    "concentrated_nll",
    "correlation_matrix",
    "correlation_vector",
    "cross_correlation",
    "eval_kernel",
    "fit",
    "fit_fixed",
    "load_model",
    "maximize_box",
    "norm_cdf",
    "norm_pdf",
    "predict",
    "save_model",
    "solve_spd",
    "variance_reduction",
]
