"""Latin hypercube designs improved by simulated annealing (maximin and MaxPro)."""

from __future__ import annotations

import logging
import math
from collections.abc import Callable

import numpy as np
from scipy.spatial.distance import pdist
from scipy.special import logsumexp

from mim_gp.errors import DesignError

from .matrix import DesignGenerator, DesignMatrix

logger = logging.getLogger(__name__)

COOLING_RATIO = 0.95
COOLING_EVERY = 100
INITIAL_TEMPERATURE_FRACTION = 0.1


def lhd_levels(n: int) -> np.ndarray:
    """Cell midpoints (2i - 1) / (2n), i = 1..n."""

    return (2.0 * np.arange(1, n + 1) - 1.0) / (2.0 * n)


def random_lhd(n: int, d: int, rng: np.random.Generator) -> np.ndarray:
    levels = lhd_levels(n)
    return np.column_stack([levels[rng.permutation(n)] for _ in range(d)])


def maximin_criterion(points: np.ndarray) -> float:
    """Minimum pairwise Euclidean distance (to be maximized)."""

    return float(pdist(points).min())


def log_maxpro_criterion(points: np.ndarray) -> float:
    """log psi(D) with psi = sum_{i<j} 1 / prod_k (x_ik - x_jk)^2 (to be minimized)."""

    pts = np.asarray(points, dtype=float)
    log_terms = np.zeros(pts.shape[0] * (pts.shape[0] - 1) // 2)
    for k in range(pts.shape[1]):
        diff = pdist(pts[:, k : k + 1], metric="cityblock")
        with np.errstate(divide="ignore"):
            log_terms -= 2.0 * np.log(diff)
    return float(logsumexp(log_terms))


def maxpro_criterion(points: np.ndarray) -> float:
    return math.exp(log_maxpro_criterion(points))


def _anneal(
    start: np.ndarray,
    loss: Callable[[np.ndarray], float],
    rng: np.random.Generator,
    iters: int,
) -> np.ndarray:
    """Minimize ``loss`` with LHD-preserving swaps; returns the best design seen."""

    current = start.copy()
    current_loss = loss(current)
    best, best_loss = current.copy(), current_loss
    temperature = INITIAL_TEMPERATURE_FRACTION * abs(current_loss) or INITIAL_TEMPERATURE_FRACTION
    n, d = current.shape
    for step in range(1, iters + 1):
        i, j = rng.choice(n, size=2, replace=False)
        k = int(rng.integers(d))
        current[[i, j], k] = current[[j, i], k]
        trial_loss = loss(current)
        delta = trial_loss - current_loss
        if delta <= 0 or rng.random() < math.exp(-delta / temperature):
            current_loss = trial_loss
            if trial_loss < best_loss:
                best, best_loss = current.copy(), trial_loss
        else:
            current[[i, j], k] = current[[j, i], k]
        if step % COOLING_EVERY == 0:
            temperature *= COOLING_RATIO
    return best


def _check(n: int, d: int) -> None:
    if n < 2:
        raise DesignError("LHD generators need n >= 2")
    if d < 1:
        raise DesignError("LHD generators need d >= 1")


def maximin_lhd(n: int, d: int, seed: int, iters: int = 2000) -> DesignMatrix:
    """Maximin Latin hypercube via annealing on random row-pair column swaps.

    Starts at T0 = 0.1 x the initial criterion and cools by 0.95 every 100 proposals.
    """

    _check(n, d)
    rng = np.random.default_rng(seed)
    start = random_lhd(n, d, rng)
    best = _anneal(start, lambda pts: -maximin_criterion(pts), rng, iters)
    logger.debug("maximin lhd n=%d d=%d min distance %.4f", n, d, maximin_criterion(best))
    return DesignMatrix(points=best, generator=DesignGenerator.MAXIMIN_LHD, seed=seed)


def maxpro_design(n: int, d: int, seed: int, iters: int = 2000) -> DesignMatrix:
    """Maximum projection Latin hypercube (minimizes psi) with the maximin annealing scheme.

    The search runs on log psi; the temperature schedule is the same as :func:`maximin_lhd`.
    """

    _check(n, d)
    rng = np.random.default_rng(seed)
    start = random_lhd(n, d, rng)
    best = _anneal(start, log_maxpro_criterion, rng, iters)
    logger.debug("maxpro n=%d d=%d log psi %.4f", n, d, log_maxpro_criterion(best))
    return DesignMatrix(points=best, generator=DesignGenerator.MAXPRO, seed=seed)


def uniform_design(n: int, d: int, seed: int) -> DesignMatrix:
    """Independent uniform points."""

    if n < 1 or d < 1:
        raise DesignError("uniform_design needs n >= 1 and d >= 1")
    rng = np.random.default_rng(seed)
    return DesignMatrix(points=rng.random((n, d)), generator=DesignGenerator.RANDOM, seed=seed)
