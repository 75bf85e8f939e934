"""Seeded random instances for the small-theta limit checks.

The corpus is frozen by its generator: ``build_corpus()`` with ``CORPUS_SEED``,
``CORPUS_SIZE`` and the separation constants below always yields the same instances
(PCG64 draws in a fixed order). Changing any of these constants defines a new corpus.
"""

from __future__ import annotations

from collections.abc import Iterator, Sequence
from dataclasses import dataclass

import numpy as np
import pandas as pd
from scipy.spatial.distance import cdist, pdist

from .limits import DEFAULT_THETAS, theorem1_check, theorem2_check

CORPUS_SEED = 20240611
CORPUS_SIZE = 20
CORPUS_ALPHAS = (0.5, 1.0, 2.0)
DIMENSIONS = (2, 3, 4)
MAX_ROWS = 4
# off-diagonal R entries stay below (1e-3 / 0.3)^(2 alpha) at theta = 1e-3
MIN_ROW_SEPARATION = 0.3
MIN_POINT_DISTANCE = 0.1
# MIM factor error at theta = 1e-3 is about 2 alpha d (1e-3 / gap)^2 <= 0.64%
MIN_COORD_GAP = 0.05


@dataclass(frozen=True)
class CorpusInstance:
    instance_id: int
    design: np.ndarray
    x: np.ndarray

    @property
    def n(self) -> int:
        return int(self.design.shape[0])

    @property
    def d(self) -> int:
        return int(self.design.shape[1])


def _draw(rng: np.random.Generator, n: int, d: int) -> tuple[np.ndarray, np.ndarray]:
    while True:
        design = rng.random((n, d))
        if n > 1 and pdist(design).min() < MIN_ROW_SEPARATION:
            continue
        x = rng.random(d)
        if cdist(design, x[None, :]).min() < MIN_POINT_DISTANCE:
            continue
        if np.abs(design - x).min() < MIN_COORD_GAP:
            continue
        return design, x


def build_corpus(seed: int = CORPUS_SEED, size: int = CORPUS_SIZE) -> list[CorpusInstance]:
    """Rejection-sampled (D, x) pairs valid for both checks.

    Design rows are at least 0.3 apart and x is at least 0.1 from every row and 0.05 from
    every row in each coordinate, so both limits are within 1% by theta = 1e-3.
    """

    rng = np.random.default_rng(seed)
    instances = []
    for i in range(size):
        d = DIMENSIONS[i % len(DIMENSIONS)]
        n = 1 + int(rng.integers(MAX_ROWS))
        design, x = _draw(rng, n, d)
        instances.append(CorpusInstance(instance_id=i, design=design, x=x))
    return instances


def iter_checks(
    instances: Sequence[CorpusInstance],
    alphas: Sequence[float] = CORPUS_ALPHAS,
    theta_seq: Sequence[float] = DEFAULT_THETAS,
    tol: float = 0.01,
) -> Iterator[dict[str, object]]:
    for inst in instances:
        for alpha in alphas:
            for check in (theorem1_check, theorem2_check):
                report = check(inst.design, inst.x, alpha, theta_seq, tol)
                for theta, lhs, err in zip(
                    report.theta_sequence, report.lhs_values, report.relative_errors, strict=True
                ):
                    yield {
                        "instance_id": inst.instance_id,
                        "theorem": report.theorem,
                        "alpha": alpha,
                        "theta": theta,
                        "lhs": lhs,
                        "rhs": report.rhs_value,
                        "rel_err": err,
                        "pass": bool(err <= tol) if theta == report.theta_sequence[-1] else None,
                    }


def theory_report(
    instances: Sequence[CorpusInstance] | None = None,
    alphas: Sequence[float] = CORPUS_ALPHAS,
    theta_seq: Sequence[float] = DEFAULT_THETAS,
    tol: float = 0.01,
) -> pd.DataFrame:
    """One row per (instance, theorem, alpha, theta); ``pass`` is set on the smallest theta."""

    rows = list(iter_checks(instances or build_corpus(), alphas, theta_seq, tol))
    columns = ["instance_id", "theorem", "alpha", "theta", "lhs", "rhs", "rel_err", "pass"]
    return pd.DataFrame(rows, columns=columns)
