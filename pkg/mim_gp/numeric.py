"""Numerical contracts: jittered Cholesky, SPD solves, normal density/CDF, box optimizer."""

from __future__ import annotations

import logging
import math
from collections.abc import Callable, Sequence
from dataclasses import dataclass

import numpy as np
from pydantic import BaseModel, ConfigDict, Field
from scipy import linalg
from scipy.special import ndtr

from .errors import DimensionMismatch, NotPositiveDefinite

logger = logging.getLogger(__name__)

MAX_JITTER = 1e-2
_SQRT_2PI = math.sqrt(2.0 * math.pi)


@dataclass(frozen=True)
class CholeskyFactor:
    """Lower factor ``L`` with ``L @ L.T == R + (jitter_used - nugget) * I``."""

    L: np.ndarray
    log_det: float
    jitter_used: float

    @property
    def n(self) -> int:
        return int(self.L.shape[0])


def _jitter_ladder(eta: float) -> list[float]:
    if eta <= 0.0:
        return [0.0]
    ladder = [eta]
    while ladder[-1] * 10.0 <= MAX_JITTER * (1 + 1e-12):
        ladder.append(ladder[-1] * 10.0)
    if ladder[-1] < MAX_JITTER:
        ladder.append(MAX_JITTER)
    return ladder


def cholesky(R: np.ndarray, eta: float) -> CholeskyFactor:
    """Factor ``R`` (nugget ``eta`` already on its diagonal), escalating jitter ×10 on failure.

    With ``eta == 0`` a single attempt is made.
    """

    R = np.asarray(R, dtype=float)
    n = R.shape[0]
    if R.ndim != 2 or R.shape[1] != n:
        raise DimensionMismatch(f"expected a square matrix, got shape {R.shape}")
    if n == 0:
        return CholeskyFactor(L=np.zeros((0, 0)), log_det=0.0, jitter_used=eta)
    eye = np.eye(n)
    for jitter in _jitter_ladder(eta):
        try:
            L = linalg.cholesky(R + (jitter - eta) * eye, lower=True, check_finite=False)
        except linalg.LinAlgError:
            continue
        diag = np.diag(L)
        if not np.all(np.isfinite(diag)) or np.any(diag <= 0.0):
            continue
        if jitter != eta:
            logger.warning("cholesky needed jitter %.1e (nugget %.1e)", jitter, eta)
        return CholeskyFactor(L=L, log_det=float(2.0 * np.sum(np.log(diag))), jitter_used=jitter)
    last = _jitter_ladder(eta)[-1]
    raise NotPositiveDefinite(
        f"matrix of size {n} is not positive definite at jitter {last:.1e}", jitter=last
    )


def solve_spd(factor: CholeskyFactor, b: np.ndarray) -> np.ndarray:
    """Return ``R^{-1} b`` by forward/back substitution on the factor."""

    b = np.asarray(b, dtype=float)
    if b.shape[0] != factor.n:
        raise DimensionMismatch(f"right-hand side has {b.shape[0]} rows, factor has {factor.n}")
    if factor.n == 0:
        return b.copy()
    return linalg.cho_solve((factor.L, True), b, check_finite=False)


def solve_lower(factor: CholeskyFactor, b: np.ndarray) -> np.ndarray:
    """Return ``L^{-1} b`` (one triangular solve)."""

    b = np.asarray(b, dtype=float)
    if b.shape[0] != factor.n:
        raise DimensionMismatch(f"right-hand side has {b.shape[0]} rows, factor has {factor.n}")
    if factor.n == 0:
        return b.copy()
    return linalg.solve_triangular(factor.L, b, lower=True, check_finite=False)


def norm_pdf(u: float | np.ndarray) -> float | np.ndarray:
    """Standard normal density."""

    out = np.exp(-0.5 * np.square(u)) / _SQRT_2PI
    return float(out) if np.ndim(out) == 0 else out


def norm_cdf(u: float | np.ndarray) -> float | np.ndarray:
    """Standard normal distribution function (Cephes ``ndtr``)."""

    out = ndtr(u)
    return float(out) if np.ndim(out) == 0 else out


# ---- box-constrained multistart pattern search ------------------------------------


class BoxOptimizerConfig(BaseModel):
    """Multistart settings: seeded candidates, then pattern-search polish of the best."""

    model_config = ConfigDict(frozen=True)

    n_candidates: int = Field(default=1000, ge=1)
    n_polish_starts: int = Field(default=20, ge=1)
    max_polish_evals: int = Field(default=200, ge=1)
    tol: float = Field(default=1e-6, gt=0)
    seed: int = 0
    initial_step: float = Field(default=0.25, gt=0)
    min_step: float = Field(default=1e-4, gt=0)


@dataclass(frozen=True)
class BoxOptimum:
    """Best point of a box search plus every start-stage candidate, ranked best first."""

    x: np.ndarray
    value: float
    ranked_x: np.ndarray
    ranked_values: np.ndarray
    n_evals: int


Objective = Callable[[np.ndarray], float]
BatchObjective = Callable[[np.ndarray], np.ndarray]


def _safe(value: float) -> float:
    return value if math.isfinite(value) or value == math.inf else -math.inf


def pattern_search(
    f: Objective,
    x0: np.ndarray,
    f0: float,
    config: BoxOptimizerConfig,
) -> tuple[np.ndarray, float, int]:
    """Coordinate-wise compass search maximizing ``f`` inside [0, 1]^d.

    The step starts at ``config.initial_step`` and halves whenever a full sweep brings
    no relative improvement above ``config.tol``; it stops below ``config.min_step`` or
    after ``config.max_polish_evals`` evaluations.
    """

    x = np.clip(np.asarray(x0, dtype=float).copy(), 0.0, 1.0)
    fx = _safe(f0)
    step = config.initial_step
    evals = 0
    d = x.size
    while step >= config.min_step and evals < config.max_polish_evals:
        start_value = fx
        for k in range(d):
            for direction in (1.0, -1.0):
                if evals >= config.max_polish_evals:
                    break
                trial = x.copy()
                trial[k] = min(1.0, max(0.0, trial[k] + direction * step))
                if trial[k] == x[k]:
                    continue
                value = _safe(float(f(trial)))
                evals += 1
                if value > fx:
                    x, fx = trial, value
                    break
        gain = fx - start_value
        scale = max(abs(start_value), 1e-300) if math.isfinite(start_value) else math.inf
        if not (gain > 0) or (math.isfinite(gain) and gain <= config.tol * scale):
            step *= 0.5
    return x, fx, evals


def maximize_box(
    f: Objective,
    d: int,
    config: BoxOptimizerConfig,
    *,
    batch: BatchObjective | None = None,
    starts: Sequence[np.ndarray] | None = None,
) -> BoxOptimum:
    """Maximize ``f`` over [0, 1]^d.

    ``starts`` (evaluated first) and ``config.n_candidates`` PCG64 uniform points seeded by
    ``config.seed`` form the candidate pool; the top ``n_polish_starts`` are polished with
    :func:`pattern_search`. ``batch``, when given, evaluates a 2-D array of candidates at once
    and must agree with ``f`` row by row. Ties break towards the lowest candidate index.
    """

    rng = np.random.default_rng(config.seed)
    pool = [np.clip(np.asarray(s, dtype=float).reshape(d), 0.0, 1.0) for s in starts or ()]
    random_points = rng.random((config.n_candidates, d))
    candidates = np.vstack([np.asarray(pool).reshape(-1, d), random_points])
    if batch is not None:
        values = np.asarray(batch(candidates), dtype=float).reshape(-1)
    else:
        values = np.array([float(f(c)) for c in candidates])
    values = np.where(np.isnan(values), -np.inf, values)
    order = np.argsort(-values, kind="stable")
    n_evals = candidates.shape[0]

    best_x = candidates[order[0]].copy()
    best_f = float(values[order[0]])
    for idx in order[: config.n_polish_starts]:
        if not np.isfinite(values[idx]):
            continue
        x, fx, used = pattern_search(f, candidates[idx], float(values[idx]), config)
        n_evals += used
        if fx > best_f:
            best_x, best_f = x, fx
    return BoxOptimum(
        x=np.clip(best_x, 0.0, 1.0),
        value=best_f,
        ranked_x=candidates[order],
        ranked_values=values[order],
        n_evals=n_evals,
    )
