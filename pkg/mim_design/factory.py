"""Build any initial design from a generator tag."""

from __future__ import annotations

from mim_gp.errors import DesignError

from .lhd import maximin_lhd, maxpro_design, uniform_design
from .matrix import DesignGenerator, DesignMatrix
from .ofat import mofat_heuristic, random_ofat_design
from .sobol import sobol_points

DEFAULT_L = 4


def default_size(generator: DesignGenerator | str, d: int) -> int:
    """l = 4 for OFAT-family generators, 4(d + 1) runs otherwise."""

    return DEFAULT_L if DesignGenerator(generator).ofat_family else 4 * (d + 1)


def n_rows(generator: DesignGenerator | str, d: int, size: int) -> int:
    return size * (d + 1) if DesignGenerator(generator).ofat_family else size


def make_design(
    generator: DesignGenerator | str,
    d: int,
    size: int | None = None,
    seed: int = 0,
    iters: int | None = None,
) -> DesignMatrix:
    """``size`` is l for mofat/ofat and the run count for every other generator.

    ``iters`` overrides the search length of the mofat (5000) and LHD (2000) generators.
    """

    gen = DesignGenerator(generator)
    size = default_size(gen, d) if size is None else size
    if gen is DesignGenerator.MOFAT:
        return mofat_heuristic(d, size, seed, iters=iters or 5000)
    if gen is DesignGenerator.OFAT:
        return random_ofat_design(d, size, seed)
    if gen is DesignGenerator.MAXIMIN_LHD:
        return maximin_lhd(size, d, seed, iters or 2000)
    if gen is DesignGenerator.MAXPRO:
        return maxpro_design(size, d, seed, iters or 2000)
    if gen is DesignGenerator.SOBOL:
        return sobol_points(size, d)
    if gen is DesignGenerator.RANDOM:
        return uniform_design(size, d, seed)
    raise DesignError("imported designs are read with read_design_csv, not generated")
