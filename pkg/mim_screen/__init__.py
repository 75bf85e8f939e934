"""Global and local sensitivity summaries for factor screening."""

from .elementary import ElementaryEffects, elementary_effects
from .total_sobol import SobolReport, surrogate_mean, total_sobol

__all__ = [
    "ElementaryEffects",
    "SobolReport",
    "elementary_effects",
    "surrogate_mean",
    "total_sobol",
]
