"""Design containers shared by every generator."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np
from scipy.spatial.distance import pdist

from mim_gp.errors import DesignError


class DesignGenerator(str, Enum):
    """Provenance tag of a design."""

    MOFAT = "mofat"
    OFAT = "ofat"
    MAXIMIN_LHD = "maximin"
    MAXPRO = "maxpro"
    SOBOL = "sobol"
    RANDOM = "random"
    IMPORTED = "imported"

    @property
    def ofat_family(self) -> bool:
        return self in (DesignGenerator.MOFAT, DesignGenerator.OFAT)


@dataclass(frozen=True)
class OFATBlock:
    """A base run and the partner point supplying each factor's changed level."""

    base: np.ndarray
    partner: np.ndarray

    def __post_init__(self) -> None:
        base = np.asarray(self.base, dtype=float).ravel()
        partner = np.asarray(self.partner, dtype=float).ravel()
        if base.shape != partner.shape:
            raise DesignError("base and partner must share a dimension")
        object.__setattr__(self, "base", base)
        object.__setattr__(self, "partner", partner)

    @property
    def d(self) -> int:
        return int(self.base.size)


@dataclass(frozen=True)
class BlockIndex:
    """Row positions of one OFAT block inside a design."""

    base_row: int
    perturbed_rows: tuple[int, ...]


@dataclass(frozen=True)
class DesignMatrix:
    """n points in [0, 1]^d (row-major) with provenance metadata."""

    points: np.ndarray
    generator: DesignGenerator = DesignGenerator.IMPORTED
    seed: int | None = None
    blocks: tuple[BlockIndex, ...] = field(default_factory=tuple)

    def __post_init__(self) -> None:
        pts = np.array(self.points, dtype=float)
        if pts.ndim != 2:
            raise DesignError(f"design points must be 2-D, got shape {pts.shape}")
        if pts.size and (np.any(pts < 0.0) or np.any(pts > 1.0) or not np.all(np.isfinite(pts))):
            raise DesignError("design coordinates must lie in [0, 1]")
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "generator", DesignGenerator(self.generator))

    @property
    def n(self) -> int:
        return int(self.points.shape[0])

    @property
    def d(self) -> int:
        return int(self.points.shape[1])

    @property
    def l(self) -> int | None:  # noqa: E743
        return len(self.blocks) if self.blocks else None

    def __len__(self) -> int:
        return self.n

    def append(self, x: np.ndarray) -> DesignMatrix:
        """Return a new design with ``x`` added as the last row (blocks are kept)."""

        row = np.asarray(x, dtype=float).reshape(1, self.d)
        return DesignMatrix(
            points=np.vstack([self.points, row]),
            generator=self.generator,
            seed=self.seed,
            blocks=self.blocks,
        )

    def validate_ofat(self) -> None:
        """Check the one-factor-change structure of every block (O(n d))."""

        if not self.blocks:
            raise DesignError("design carries no OFAT block metadata")
        if self.n != len(self.blocks) * (self.d + 1):
            raise DesignError(
                f"OFAT design must have l(d+1) = {len(self.blocks) * (self.d + 1)} rows"
            )
        for b, block in enumerate(self.blocks):
            if len(block.perturbed_rows) != self.d:
                raise DesignError(f"block {b} has {len(block.perturbed_rows)} perturbed rows")
            base = self.points[block.base_row]
            for j, row in enumerate(block.perturbed_rows):
                changed = np.flatnonzero(self.points[row] != base)
                if changed.tolist() != [j]:
                    raise DesignError(
                        f"block {b}, row {row}: expected a change in coordinate {j + 1} only, "
                        f"found changes in {(changed + 1).tolist()}"
                    )


def min_distance(points: np.ndarray) -> float:
    """Smallest pairwise Euclidean distance (inf for fewer than two points)."""

    pts = np.asarray(points, dtype=float)
    if pts.shape[0] < 2:
        return float("inf")
    return float(pdist(pts).min())
