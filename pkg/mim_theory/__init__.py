"""Numerical checks of the small-length-scale limits of ALM under IM and MIM kernels."""

from .corpus import CorpusInstance, build_corpus, theory_report
from .limits import (
    CriterionKind,
    LimitCheckReport,
    SandwichResult,
    log_sequential_criterion,
    sandwich_check,
    sequential_criterion,
    theorem1_check,
    theorem2_check,
)

__all__ = [
    "CorpusInstance",
    "CriterionKind",
    "LimitCheckReport",
    "SandwichResult",
    "build_corpus",
    "log_sequential_criterion",
    "sandwich_check",
    "sequential_criterion",
    "theorem1_check",
    "theorem2_check",
    "theory_report",
]
