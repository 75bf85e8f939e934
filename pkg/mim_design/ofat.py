"""One-factor-at-a-time designs and the maximin MOFAT construction heuristic."""

from __future__ import annotations

import logging
from collections.abc import Sequence

import numpy as np
from scipy.spatial.distance import pdist

from mim_gp.errors import DesignError

from .matrix import BlockIndex, DesignGenerator, DesignMatrix, OFATBlock

logger = logging.getLogger(__name__)

_PHI_P = 15
_TIE = 1e-12


def level_grid(l: int) -> np.ndarray:  # noqa: E741
    """The 2l equispaced mid-levels (2i - 1) / (4l), i = 1..2l."""

    g = 2 * l
    return (2.0 * np.arange(1, g + 1) - 1.0) / (2.0 * g)


def _block_index(start: int, d: int) -> BlockIndex:
    return BlockIndex(base_row=start, perturbed_rows=tuple(range(start + 1, start + d + 1)))


def ofat_design(
    blocks: Sequence[OFATBlock],
    generator: DesignGenerator = DesignGenerator.OFAT,
    seed: int | None = None,
) -> DesignMatrix:
    """Emit each block's base row followed by its d one-factor changes, block-major."""

    if not blocks:
        raise DesignError("an OFAT design needs at least one block")
    d = blocks[0].d
    rows: list[np.ndarray] = []
    index: list[BlockIndex] = []
    for b, block in enumerate(blocks):
        if block.d != d:
            raise DesignError(f"block {b} has dimension {block.d}, expected {d}")
        same = np.flatnonzero(block.base == block.partner)
        if same.size:
            raise DesignError(
                f"block {b}: base and partner coincide in coordinate(s) {(same + 1).tolist()}"
            )
        start = len(rows)
        rows.append(block.base.copy())
        for j in range(d):
            row = block.base.copy()
            row[j] = block.partner[j]
            rows.append(row)
        index.append(_block_index(start, d))
    design = DesignMatrix(
        points=np.vstack(rows), generator=generator, seed=seed, blocks=tuple(index)
    )
    design.validate_ofat()
    return design


def _blocks_from_levels(
    levels: np.ndarray, base: np.ndarray, partner: np.ndarray
) -> list[OFATBlock]:
    pairs = zip(base, partner, strict=True)
    return [OFATBlock(base=levels[b], partner=levels[p]) for b, p in pairs]


def _points_from_levels(levels: np.ndarray, base: np.ndarray, partner: np.ndarray) -> np.ndarray:
    l, d = base.shape  # noqa: E741
    b = levels[base]
    p = levels[partner]
    out = np.repeat(b, d + 1, axis=0).reshape(l, d + 1, d)
    idx = np.arange(d)
    out[:, idx + 1, idx] = p
    return out.reshape(l * (d + 1), d)


def _criterion(points: np.ndarray) -> tuple[float, float]:
    dist = pdist(points)
    dmin = float(dist.min())
    phi = float(np.sum((max(dmin, _TIE) / np.maximum(dist, _TIE)) ** _PHI_P))
    return dmin, phi


def _better(a: tuple[float, float], b: tuple[float, float]) -> bool:
    if a[0] > b[0] + _TIE:
        return True
    return abs(a[0] - b[0]) <= _TIE and a[1] < b[1]


def _random_levels(
    rng: np.random.Generator, l: int, d: int, g: int  # noqa: E741
) -> tuple[np.ndarray, np.ndarray]:
    base = rng.integers(0, g, size=(l, d))
    shift = rng.integers(1, g, size=(l, d))
    partner = (base + shift) % g
    return base, partner


def random_ofat_design(d: int, l: int, seed: int) -> DesignMatrix:  # noqa: E741
    """Unoptimized OFAT design: random base/partner levels on the 2l-level grid."""

    if d < 1 or l < 1:
        raise DesignError("random_ofat_design needs d >= 1 and l >= 1")
    rng = np.random.default_rng(seed)
    levels = level_grid(l)
    base, partner = _random_levels(rng, l, d, levels.size)
    return ofat_design(_blocks_from_levels(levels, base, partner), DesignGenerator.OFAT, seed)


def mofat_heuristic(
    d: int,
    l: int,  # noqa: E741
    seed: int,
    iters: int = 5000,
    restarts: int = 5,
) -> DesignMatrix:
    """Maximin placement of l OFAT blocks on the 2l-level grid.

    Seeded random restarts followed by coordinate-exchange hill climbing: a move
    relocates one base or partner coordinate to another grid level and is kept when it
    raises the minimum pairwise distance (ties broken by the phi_15 criterion).
    """

    if d < 1 or l < 2:
        raise DesignError("mofat_heuristic needs d >= 1 and l >= 2")
    rng = np.random.default_rng(seed)
    levels = level_grid(l)
    g = levels.size
    per_restart = max(1, iters // max(1, restarts))

    best_state: tuple[np.ndarray, np.ndarray] | None = None
    best_crit = (-np.inf, np.inf)
    for _ in range(max(1, restarts)):
        base, partner = _random_levels(rng, l, d, g)
        crit = _criterion(_points_from_levels(levels, base, partner))
        for _ in range(per_restart):
            b = int(rng.integers(l))
            k = int(rng.integers(d))
            move_base = bool(rng.integers(2))
            target, other = (base, partner) if move_base else (partner, base)
            choices = [v for v in range(g) if v != target[b, k] and v != other[b, k]]
            if not choices:
                continue
            old = target[b, k]
            target[b, k] = choices[int(rng.integers(len(choices)))]
            trial = _criterion(_points_from_levels(levels, base, partner))
            if _better(trial, crit) or trial == crit:
                crit = trial
            else:
                target[b, k] = old
        if best_state is None or _better(crit, best_crit):
            best_state, best_crit = (base.copy(), partner.copy()), crit
    assert best_state is not None
    logger.debug("mofat d=%d l=%d seed=%d min distance %.4f", d, l, seed, best_crit[0])
    blocks = _blocks_from_levels(levels, *best_state)
    return ofat_design(blocks, DesignGenerator.MOFAT, seed)


def infer_ofat_blocks(points: np.ndarray) -> tuple[BlockIndex, ...] | None:
    """Recover block metadata from a block-major OFAT layout, or None if it is not one."""

    pts = np.asarray(points, dtype=float)
    n, d = pts.shape
    if n == 0 or n % (d + 1):
        return None
    blocks: list[BlockIndex] = []
    for start in range(0, n, d + 1):
        base = pts[start]
        for j in range(d):
            changed = np.flatnonzero(pts[start + 1 + j] != base)
            if changed.tolist() != [j]:
                return None
        blocks.append(_block_index(start, d))
    return tuple(blocks)
