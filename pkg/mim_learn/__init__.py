"""Acquisition functions and the sequential active-learning loop."""

from .acquisition import (
    AcquisitionKind,
    AcquisitionSpec,
    Proposal,
    alm_score,
    alm_scores,
    ei_from_moments,
    ei_scores,
    expected_improvement,
    next_point,
)
from .events import IterationEvent, RunEventBus
from .loop import run_active_learning
from .runlog import IterationRecord, RunLog, read_runlog

__all__ = [
    "AcquisitionKind",
    "AcquisitionSpec",
    "IterationEvent",
    "IterationRecord",
    "Proposal",
    "RunEventBus",
    "RunLog",
    "alm_score",
    "alm_scores",
    "ei_from_moments",
    "ei_scores",
    "expected_improvement",
    "next_point",
    "read_runlog",
    "run_active_learning",
]
