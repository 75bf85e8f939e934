"""Sobol' low-discrepancy points (Joe-Kuo direction numbers bundled with SciPy)."""

from __future__ import annotations

import warnings

import numpy as np
from scipy.stats import qmc

from mim_gp.errors import DesignError

from .matrix import DesignGenerator, DesignMatrix

MAX_DIM = 21201


def sobol_sequence(n: int, d: int, skip: int = 1, scramble_seed: int | None = None) -> np.ndarray:
    """Points ``skip .. skip + n - 1`` of the d-dimensional Sobol' sequence.

    ``scramble_seed`` switches on Owen scrambling seeded by that value.
    """

    if not 1 <= d <= MAX_DIM:
        raise DesignError(f"Sobol' direction numbers cover 1 <= d <= {MAX_DIM}, got d={d}")
    if n < 1:
        raise DesignError("sobol_points needs n >= 1")
    if skip < 0:
        raise DesignError("skip must be nonnegative")
    engine = qmc.Sobol(d, scramble=scramble_seed is not None, seed=scramble_seed)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", UserWarning)
        if skip:
            engine.fast_forward(skip)
        return engine.random(n)


def sobol_points(n: int, d: int, skip: int = 1) -> DesignMatrix:
    """Unscrambled Sobol' design; index 0 (the origin) is skipped by default."""

    return DesignMatrix(points=sobol_sequence(n, d, skip), generator=DesignGenerator.SOBOL)
