"""ALM and EI acquisition functions and their maximization over the unit cube."""

from __future__ import annotations

import logging
from enum import Enum
from typing import Any, NamedTuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from mim_gp.kriging import GPModel, batch_predict
from mim_gp.numeric import BoxOptimizerConfig, maximize_box, norm_cdf, norm_pdf

logger = logging.getLogger(__name__)


class AcquisitionKind(str, Enum):
    ALM = "alm"
    EI = "ei"


class AcquisitionSpec(BaseModel):
    """Acquisition choice plus optimizer and duplicate-guard settings."""

    model_config = ConfigDict(frozen=True)

    kind: AcquisitionKind = AcquisitionKind.ALM
    optimizer: BoxOptimizerConfig = Field(default_factory=BoxOptimizerConfig)
    duplicate_tol: float = Field(default=1e-8, gt=0)
    s_floor: float = Field(default=1e-12, gt=0)


class Proposal(NamedTuple):
    x: np.ndarray
    acq_value: float
    perturbed: bool = False


def ei_from_moments(
    y_hat: float | np.ndarray,
    s: float | np.ndarray,
    y_star: float,
    s_floor: float = 1e-12,
) -> float | np.ndarray:
    """Closed-form E[max(y_star - Y, 0)] for Y ~ N(y_hat, s^2).

    Falls back to max(y_star - y_hat, 0) when s <= s_floor.
    """

    y_hat = np.asarray(y_hat, dtype=float)
    s = np.asarray(s, dtype=float)
    improvement = y_star - y_hat
    safe_s = np.where(s > s_floor, s, 1.0)
    u = improvement / safe_s
    ei = improvement * norm_cdf(u) + safe_s * norm_pdf(u)
    out = np.where(s > s_floor, np.maximum(ei, 0.0), np.maximum(improvement, 0.0))
    return float(out) if out.ndim == 0 else out


def alm_scores(model: GPModel, X: np.ndarray) -> np.ndarray:
    return batch_predict(model, X)[1]


def ei_scores(model: GPModel, X: np.ndarray, y_star: float, s_floor: float = 1e-12) -> np.ndarray:
    y_hat, s2 = batch_predict(model, X)
    return np.asarray(ei_from_moments(y_hat, np.sqrt(s2), y_star, s_floor))


def alm_score(model: GPModel, x: Any) -> float:
    """Posterior variance s^2(x)."""

    return float(alm_scores(model, np.asarray(x, dtype=float).reshape(1, -1))[0])


def expected_improvement(
    model: GPModel, x: Any, y_star: float, s_floor: float = 1e-12
) -> float:
    """EI at ``x`` for minimization with incumbent ``y_star``."""

    return float(ei_scores(model, np.asarray(x, dtype=float).reshape(1, -1), y_star, s_floor)[0])


def _scorer(model: GPModel, spec: AcquisitionSpec):
    if spec.kind is AcquisitionKind.ALM:
        return lambda X: alm_scores(model, X)
    y_star = float(np.min(model.y))
    return lambda X: ei_scores(model, X, y_star, spec.s_floor)


def _is_duplicate(design: np.ndarray, x: np.ndarray, tol: float) -> bool:
    if design.shape[0] == 0:
        return False
    return bool(np.min(np.max(np.abs(design - x), axis=1)) <= tol)


def next_point(model: GPModel, spec: AcquisitionSpec) -> Proposal:
    """Maximize the acquisition; never return a point within ``duplicate_tol`` of the design.

    A duplicate winner is replaced by the best non-duplicate start-stage candidate; if all
    candidates are duplicates the winner is moved by ``duplicate_tol * 1e3`` along its
    least-varied coordinate (flagged via ``Proposal.perturbed``).
    """

    batch = _scorer(model, spec)
    design = model.design
    best = maximize_box(
        lambda x: float(batch(x.reshape(1, -1))[0]),
        model.d,
        spec.optimizer,
        batch=batch,
    )
    if not _is_duplicate(design, best.x, spec.duplicate_tol):
        return Proposal(best.x, best.value)

    for x, value in zip(best.ranked_x, best.ranked_values, strict=True):
        if not _is_duplicate(design, x, spec.duplicate_tol):
            logger.debug("acquisition winner duplicates a design point; using next candidate")
            return Proposal(np.array(x, dtype=float), float(value))

    x = best.x.copy()
    spread = np.ptp(design, axis=0) if design.shape[0] else np.zeros(model.d)
    k = int(np.argmin(spread))
    step = spec.duplicate_tol * 1e3
    x[k] = x[k] + step if x[k] + step <= 1.0 else x[k] - step
    x = np.clip(x, 0.0, 1.0)
    value = float(batch(x.reshape(1, -1))[0])
    logger.warning(
        "all acquisition candidates duplicate the design; perturbed coordinate %d", k + 1
    )
    return Proposal(x, value, perturbed=True)
