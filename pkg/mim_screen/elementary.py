"""Elementary effects from the l blocks of an OFAT-family design."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any

import numpy as np

from mim_design.matrix import DesignMatrix
from mim_gp.errors import DesignError, DimensionMismatch


@dataclass(frozen=True)
class ElementaryEffects:
    """Per-factor mean |effect| and its standard deviation over blocks."""

    mu_star: tuple[float, ...]
    sigma: tuple[float, ...]
    effects: np.ndarray

    @property
    def d(self) -> int:
        return len(self.mu_star)


def elementary_effects(D: DesignMatrix, y: Any) -> ElementaryEffects:
    """Finite differences (y_perturbed - y_base) / (partner_k - base_k), per block and factor.

    The standard deviation uses ddof=1 and is 0 for a single block.
    """

    if not D.blocks:
        raise DesignError("elementary effects need a design with OFAT block metadata")
    D.validate_ofat()
    out = np.asarray(y, dtype=float).reshape(-1)
    if out.size != D.n:
        raise DimensionMismatch(f"{out.size} outputs for {D.n} design rows")

    effects = np.empty((len(D.blocks), D.d))
    for b, block in enumerate(D.blocks):
        base = D.points[block.base_row]
        for k, row in enumerate(block.perturbed_rows):
            step = D.points[row, k] - base[k]
            effects[b, k] = (out[row] - out[block.base_row]) / step
    mu_star = np.mean(np.abs(effects), axis=0)
    sigma = np.std(effects, axis=0, ddof=1) if effects.shape[0] > 1 else np.zeros(D.d)
    return ElementaryEffects(
        mu_star=tuple(float(v) for v in mu_star),
        sigma=tuple(float(v) for v in sigma),
        effects=effects,
    )
