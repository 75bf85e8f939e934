from __future__ import annotations

import math

import numpy as np
import pytest
from scipy.spatial.distance import cdist, pdist

from mim_gp.errors import CoordinateCollision, PointInDesign
from mim_gp.kernels import KernelSpec
from mim_gp.kriging import fit_fixed, variance_reduction
from mim_learn import alm_score
from mim_theory import (
    LimitCheckReport,
    build_corpus,
    log_sequential_criterion,
    sandwich_check,
    sequential_criterion,
    theorem1_check,
    theorem2_check,
    theory_report,
)
from mim_theory.corpus import MIN_COORD_GAP, MIN_POINT_DISTANCE, MIN_ROW_SEPARATION
from mim_theory.limits import log_quadratic_form

D2 = np.array([[0.2, 0.3], [0.7, 0.8]])
X2 = np.array([0.6, 0.1])


def test_sequential_criteria_by_hand() -> None:
    D = np.array([[0.0, 0.0]])
    x = np.array([0.5, 0.5])
    assert sequential_criterion(D, x, 1.0, "maximin") == pytest.approx(4.0)
    assert sequential_criterion(D, x, 1.0, "maxpro") == pytest.approx(256.0)
    assert sequential_criterion(D, np.array([0.0, 0.5]), 1.0, "maxpro") == math.inf
    assert log_sequential_criterion(D, x, 0.5, "maximin") == pytest.approx(math.log(2.0))


@pytest.mark.parametrize("alpha", [0.5, 1.0, 2.0])
def test_im_limit_is_sequential_maximin(alpha: float) -> None:
    report = theorem1_check(D2, X2, alpha)
    assert report.converged
    assert report.theorem == "theorem1"
    assert report.theta_sequence == (1e-1, 1e-2, 1e-3)
    assert report.relative_errors[-1] <= report.relative_errors[0]
    assert report.rhs_value == pytest.approx(sequential_criterion(D2, X2, alpha, "maximin"))


@pytest.mark.parametrize("alpha", [0.5, 1.0, 2.0])
def test_mim_limit_is_sequential_maxpro(alpha: float) -> None:
    report = theorem2_check(D2, X2, alpha)
    assert report.converged
    assert report.final_error <= 0.01
    assert not any(report.jitter_flags)


def test_limit_checks_reject_degenerate_points() -> None:
    with pytest.raises(PointInDesign):
        theorem1_check(D2, D2[0] + 1e-4, 1.0)
    with pytest.raises(CoordinateCollision):
        theorem2_check(D2, np.array([0.2, 0.5]), 1.0)


def test_report_requires_decreasing_thetas() -> None:
    with pytest.raises(ValueError):
        LimitCheckReport("theorem1", (1e-3, 1e-2), (1.0, 1.0), 1.0, (0.0, 0.0), 0.01)


def test_log_quadratic_form_matches_the_model() -> None:
    D = np.random.default_rng(2).random((4, 3))
    spec = KernelSpec.isotropic("mim", 3, 0.4, alpha=1.5)
    x = np.array([0.3, 0.3, 0.9])
    model = fit_fixed(D, np.arange(4.0), spec)
    log_quad, jittered = log_quadratic_form(spec, D, x)
    assert not jittered
    assert math.exp(log_quad) == pytest.approx(float(variance_reduction(model, x)[0]), rel=1e-9)


@pytest.mark.parametrize("family", ["mim", "gaussian", "im"])
def test_eigenvalue_sandwich(family: str) -> None:
    rng = np.random.default_rng(7)
    D = rng.random((6, 3))
    spec = KernelSpec.isotropic(family, 3, 0.5)
    for x in rng.random((5, 3)):
        result = sandwich_check(spec, D, x)
        assert result.holds()
        lower, quad, upper = result
        assert lower <= quad * (1 + 1e-10) and quad <= upper * (1 + 1e-10)


def test_sandwich_uses_the_jittered_matrix() -> None:
    D = np.array([[0.3, 0.3], [0.3, 0.3]])
    spec = KernelSpec.isotropic("gaussian", 2, 0.5, nugget=1e-17)
    result = sandwich_check(spec, D, np.array([0.6, 0.6]))
    assert result.jitter_used > spec.nugget
    assert result.lambda_min > 0.0
    assert result.holds()


def test_small_theta_alm_maximizer_is_the_sequential_maxpro_minimizer() -> None:
    D = np.array([[0.13, 0.27], [0.39, 0.83], [0.61, 0.53], [0.87, 0.09]])
    spec = KernelSpec.isotropic("mim", 2, 1e-3, alpha=1.0)
    model = fit_fixed(D, np.array([1.0, 3.0, 2.0, 5.0]), spec)
    ticks = np.linspace(0.0, 1.0, 51)
    grid = np.array([[a, b] for a in ticks for b in ticks])

    criterion = np.array([log_sequential_criterion(D, x, 1.0, "maxpro") for x in grid])
    # s2 = sigma2 (1 - r'R^{-1}r): the largest ALM score sits at the smallest reduction
    reduction = variance_reduction(model, grid)
    scores = np.array([alm_score(model, x) for x in grid])

    best = int(np.argmin(reduction))
    assert best == int(np.argmin(criterion))
    assert scores[best] == scores.max()


def test_corpus_respects_its_separation_rules() -> None:
    corpus = build_corpus()
    assert len(corpus) == 20
    assert [inst.d for inst in corpus[:6]] == [2, 3, 4, 2, 3, 4]
    for inst in corpus:
        assert 1 <= inst.n <= 4
        if inst.n > 1:
            assert pdist(inst.design).min() >= MIN_ROW_SEPARATION
        assert cdist(inst.design, inst.x[None, :]).min() >= MIN_POINT_DISTANCE
        assert np.abs(inst.design - inst.x).min() >= MIN_COORD_GAP
    again = build_corpus()
    np.testing.assert_array_equal(corpus[5].design, again[5].design)


def test_every_corpus_instance_converges() -> None:
    frame = theory_report()
    assert len(frame) == 20 * 3 * 2 * 3
    final = frame[frame["pass"].notna()]
    assert len(final) == 20 * 3 * 2
    assert final["pass"].astype(bool).all()
    assert final["rel_err"].max() <= 0.01
