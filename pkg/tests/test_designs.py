from __future__ import annotations

import numpy as np
import pytest

from mim_design import (
    DesignGenerator,
    DesignMatrix,
    OFATBlock,
    infer_ofat_blocks,
    level_grid,
    log_maxpro_criterion,
    make_design,
    maximin_criterion,
    maximin_lhd,
    maxpro_criterion,
    maxpro_design,
    min_distance,
    mofat_heuristic,
    ofat_design,
    random_ofat_design,
    read_design_csv,
    sobol_points,
    sobol_sequence,
    write_design_csv,
)
from mim_design.lhd import lhd_levels, random_lhd
from mim_gp.errors import DesignError, DesignFormatError


def test_level_grid() -> None:
    np.testing.assert_allclose(level_grid(2), [0.125, 0.375, 0.625, 0.875])


def test_mofat_has_l_blocks_of_d_plus_one_rows() -> None:
    D = mofat_heuristic(10, 4, seed=7, iters=500)
    assert D.n == 44
    assert D.l == 4
    assert D.generator is DesignGenerator.MOFAT
    D.validate_ofat()
    assert set(np.round(D.points.ravel(), 12)) <= set(np.round(level_grid(4), 12))


def test_mofat_beats_its_random_start_on_separation() -> None:
    searched = mofat_heuristic(4, 3, seed=2, iters=2000)
    random = random_ofat_design(4, 3, seed=2)
    assert min_distance(searched.points) >= min_distance(random.points)
    assert min_distance(searched.points) > 0


def test_ofat_design_layout_and_validation() -> None:
    block = OFATBlock(base=[0.25, 0.25], partner=[0.75, 0.5])
    D = ofat_design([block])
    np.testing.assert_allclose(D.points, [[0.25, 0.25], [0.75, 0.25], [0.25, 0.5]])
    assert D.blocks[0].perturbed_rows == (1, 2)
    with pytest.raises(DesignError):
        ofat_design([OFATBlock(base=[0.25, 0.25], partner=[0.25, 0.5])])
    with pytest.raises(DesignError):
        mofat_heuristic(3, 1, seed=0)


def test_infer_blocks_only_for_ofat_layouts() -> None:
    D = random_ofat_design(3, 2, seed=5)
    assert infer_ofat_blocks(D.points) == D.blocks
    assert infer_ofat_blocks(np.random.default_rng(0).random((8, 3))) is None


def test_two_point_lhd_in_one_dimension() -> None:
    D = maximin_lhd(2, 1, seed=0, iters=50)
    np.testing.assert_allclose(np.sort(D.points[:, 0]), [0.25, 0.75])


@pytest.mark.parametrize("make", [maximin_lhd, maxpro_design])
def test_lhd_columns_are_permutations_of_cell_midpoints(make) -> None:
    D = make(12, 3, seed=3, iters=300)
    for k in range(3):
        np.testing.assert_allclose(np.sort(D.points[:, k]), lhd_levels(12))


def test_annealing_never_worsens_the_start() -> None:
    start = random_lhd(10, 3, np.random.default_rng(4))
    assert maximin_criterion(maximin_lhd(10, 3, seed=4, iters=500).points) >= maximin_criterion(
        start
    )
    assert log_maxpro_criterion(maxpro_design(10, 3, seed=4, iters=500).points) <= (
        log_maxpro_criterion(start)
    )


def test_lhd_is_deterministic() -> None:
    a = maxpro_design(8, 2, seed=9, iters=200)
    b = maxpro_design(8, 2, seed=9, iters=200)
    np.testing.assert_array_equal(a.points, b.points)


def test_sobol_skips_the_origin() -> None:
    D = sobol_points(4, 2)
    np.testing.assert_allclose(D.points[:2], [[0.5, 0.5], [0.75, 0.25]])
    assert sobol_sequence(4, 2, skip=0)[0].tolist() == [0.0, 0.0]
    scrambled = sobol_sequence(8, 3, skip=0, scramble_seed=1)
    assert np.all((scrambled >= 0) & (scrambled < 1))
    with pytest.raises(DesignError):
        sobol_sequence(4, 0)


def test_sobol_in_one_dimension_is_van_der_corput() -> None:
    np.testing.assert_allclose(sobol_points(3, 1).points[:, 0], [0.5, 0.75, 0.25])


def _grid_star_discrepancy(points: np.ndarray, m: int = 64) -> float:
    t = np.arange(1, m + 1) / m
    inside = (points[:, None, None, 0] < t[None, :, None]) & (
        points[:, None, None, 1] < t[None, None, :]
    )
    return float(np.abs(inside.mean(axis=0) - np.outer(t, t)).max())


def test_sobol_is_more_uniform_than_random_points() -> None:
    sobol = _grid_star_discrepancy(sobol_points(256, 2).points)
    for seed in range(10):
        assert sobol < _grid_star_discrepancy(np.random.default_rng(seed).random((256, 2)))


def test_maxpro_has_lower_psi_than_maximin_lhd() -> None:
    seeds = range(20)
    maxpro = np.mean([maxpro_criterion(maxpro_design(10, 3, s).points) for s in seeds])
    maximin = np.mean([maxpro_criterion(maximin_lhd(10, 3, s).points) for s in seeds])
    assert maxpro <= maximin


def test_make_design_default_sizes() -> None:
    assert make_design("maxpro", 3, seed=0, iters=50).n == 16
    assert make_design("mofat", 3, seed=0, iters=100).n == 16
    assert make_design("ofat", 3, size=2, seed=0).n == 8
    assert make_design("random", 2, size=5, seed=1).n == 5
    with pytest.raises(DesignError):
        make_design("imported", 2)


def test_design_matrix_rejects_points_outside_the_cube() -> None:
    with pytest.raises(DesignError):
        DesignMatrix(points=np.array([[0.5, 1.2]]))
    D = DesignMatrix(points=np.array([[0.5, 0.5]]))
    assert D.append(np.array([0.1, 0.9])).n == 2


def test_design_csv_round_trip(tmp_path) -> None:
    D = mofat_heuristic(3, 2, seed=1, iters=200)
    path = write_design_csv(D, tmp_path / "d.csv")
    assert (tmp_path / "d.meta").read_text().startswith("generator=mofat\nseed=1\n")
    back = read_design_csv(path)
    np.testing.assert_array_equal(back.points, D.points)
    assert back.generator is DesignGenerator.MOFAT
    assert back.blocks == D.blocks


def test_design_csv_errors(tmp_path) -> None:
    bad_value = tmp_path / "bad.csv"
    bad_value.write_text("x1,x2\n0.1,0.2\n0.3,1.5\n")
    with pytest.raises(DesignFormatError, match="row 2, column x2"):
        read_design_csv(bad_value)

    bad_header = tmp_path / "header.csv"
    bad_header.write_text("a,b\n0.1,0.2\n")
    with pytest.raises(DesignFormatError, match="header"):
        read_design_csv(bad_header)

    empty = tmp_path / "empty.csv"
    empty.write_text("x1,x2\n")
    with pytest.raises(DesignFormatError):
        read_design_csv(empty)
