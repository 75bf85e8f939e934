from __future__ import annotations

import math

import numpy as np
import pytest

from mim_gp.errors import DesignError, IterationError
from mim_gp.kernels import KernelSpec
from mim_gp.kriging import fit_fixed, predict
from mim_gp.numeric import BoxOptimizerConfig
from mim_learn import (
    AcquisitionKind,
    AcquisitionSpec,
    IterationRecord,
    RunEventBus,
    RunLog,
    alm_score,
    ei_from_moments,
    expected_improvement,
    next_point,
    read_runlog,
    run_active_learning,
)


def _model(shift: float = 0.0, seed: int = 0):
    rng = np.random.default_rng(seed)
    D = rng.random((6, 2))
    y = np.cos(4 * D[:, 0]) + D[:, 1] + shift
    return fit_fixed(D, y, KernelSpec.isotropic("mim", 2, 0.3, alpha=1.0))


def test_ei_closed_form_special_cases() -> None:
    assert ei_from_moments(1.0, 0.0, 3.0) == pytest.approx(2.0)
    assert ei_from_moments(3.0, 0.0, 1.0) == 0.0
    assert ei_from_moments(1.0, 1.0, 1.0) == pytest.approx(0.398942, abs=1e-6)
    phi = math.exp(-0.5) / math.sqrt(2 * math.pi)
    assert ei_from_moments(2.0, 1.0, 1.0) == pytest.approx(phi - 0.1586553, abs=1e-6)


def test_ei_matches_monte_carlo() -> None:
    draws = np.random.default_rng(42).normal(2.0, 1.0, 2_000_000)
    mc = float(np.mean(np.maximum(1.0 - draws, 0.0)))
    assert ei_from_moments(2.0, 1.0, 1.0) == pytest.approx(mc, abs=1e-3)


def test_ei_is_nonnegative_and_shift_invariant() -> None:
    base, shifted = _model(), _model(shift=5.0)
    y_star = float(base.y.min())
    for x in np.random.default_rng(3).random((25, 2)):
        ei = expected_improvement(base, x, y_star)
        assert ei >= 0.0
        assert expected_improvement(shifted, x, y_star + 5.0) == pytest.approx(ei, abs=1e-10)


def test_alm_score_behaviour() -> None:
    model = _model()
    assert alm_score(model, model.design[2]) <= 1e-4 * model.sigma2
    assert alm_score(model, [0.4, 0.6]) == predict(model, [0.4, 0.6])[1]
    assert alm_score(_model(shift=3.0), [0.4, 0.6]) == pytest.approx(
        alm_score(model, [0.4, 0.6]), rel=1e-8
    )

    D = np.array([[0.0, 0.0], [0.05, 0.05]])
    far = fit_fixed(D, np.array([0.0, 1.0]), KernelSpec.isotropic("gaussian", 2, 0.01))
    assert abs(alm_score(far, [0.9, 0.9]) - far.sigma2) <= 1e-5 * far.sigma2


def test_alm_picks_a_corner_around_a_central_point() -> None:
    spec = KernelSpec.isotropic("gaussian", 2, 0.3)
    model = fit_fixed(np.array([[0.5, 0.5]]), np.array([1.0]), spec, mu=1.0, sigma2=1.0)
    proposal = next_point(model, AcquisitionSpec(kind=AcquisitionKind.ALM))
    corners = np.array([[0, 0], [0, 1], [1, 0], [1, 1]], dtype=float)
    assert np.min(np.max(np.abs(corners - proposal.x), axis=1)) <= 1e-2
    assert not proposal.perturbed


def test_alm_argmax_ignores_variance_scale() -> None:
    D = np.random.default_rng(1).random((5, 2))
    spec = KernelSpec.isotropic("mim", 2, 0.3)
    acq = AcquisitionSpec(optimizer=BoxOptimizerConfig(seed=4, n_candidates=300))
    a = next_point(fit_fixed(D, D[:, 0], spec, sigma2=1.0), acq)
    b = next_point(fit_fixed(D, D[:, 0], spec, sigma2=8.0), acq)
    np.testing.assert_array_equal(a.x, b.x)
    assert b.acq_value == pytest.approx(8.0 * a.acq_value)


def test_next_point_is_deterministic_and_inside_the_box() -> None:
    model = _model()
    acq = AcquisitionSpec(kind=AcquisitionKind.EI, optimizer=BoxOptimizerConfig(seed=9))
    a, b = next_point(model, acq), next_point(model, acq)
    np.testing.assert_array_equal(a.x, b.x)
    assert np.all((a.x >= 0) & (a.x <= 1))
    assert np.min(np.max(np.abs(model.design - a.x), axis=1)) > acq.duplicate_tol


def test_duplicate_winner_is_perturbed_and_flagged() -> None:
    seed = 13
    candidate = np.random.default_rng(seed).random((1, 2))[0]
    D = np.vstack([candidate, [0.05, 0.95]])
    model = fit_fixed(D, np.array([0.0, 1.0]), KernelSpec.isotropic("gaussian", 2, 0.3))
    optimizer = BoxOptimizerConfig(
        seed=seed, n_candidates=1, n_polish_starts=1, initial_step=1e-5, min_step=1e-4
    )
    proposal = next_point(model, AcquisitionSpec(optimizer=optimizer))
    assert proposal.perturbed
    assert np.max(np.abs(proposal.x - candidate)) == pytest.approx(1e-5)
    assert np.all((proposal.x >= 0) & (proposal.x <= 1))


def _quadratic(x: np.ndarray) -> float:
    return float((x[0] - 0.3) ** 2)


def test_budget_equal_to_initial_design_runs_no_iterations() -> None:
    D0 = np.array([[0.1], [0.5], [0.9]])
    model, log = run_active_learning(_quadratic, D0, 3, "mim")
    assert len(log) == 3
    assert log.n_initial == 3
    assert model.n == 3
    assert all(r.acq_value is None for r in log.records)


def test_ei_finds_the_minimum_of_a_quadratic() -> None:
    D0 = np.array([[0.1], [0.9]])
    acq = AcquisitionSpec(kind=AcquisitionKind.EI)
    model, log = run_active_learning(_quadratic, D0, 10, "gaussian", acq)
    assert len(log) == 10
    assert log.best_y <= 1e-3
    assert np.all(np.diff(log.best_curve()) <= 0)
    assert model.n == 10


def test_loop_publishes_one_event_per_evaluation() -> None:
    bus = RunEventBus()
    events = []
    bus.subscribe(events.append)
    D0 = np.array([[0.2, 0.2], [0.8, 0.3], [0.4, 0.9]])

    def f(x: np.ndarray) -> float:
        return float(np.sin(3 * x[0]) + x[1])

    _, log = run_active_learning(f, D0, 5, "mim", bus=bus, header={"function": "demo"})
    assert len(events) == 5
    assert [e.model is None for e in events] == [True, True, False, False, False]
    assert [e.record.iteration for e in events] == [0, 1, 2, 3, 4]
    assert log.header["function"] == "demo"
    assert log.header["kernel"] == "mim"


def test_loop_rejects_budget_below_initial_design() -> None:
    with pytest.raises(ValueError):
        run_active_learning(_quadratic, np.array([[0.1], [0.5]]), 1, "mim")


def test_loop_needs_two_initial_rows() -> None:
    with pytest.raises(DesignError):
        run_active_learning(_quadratic, np.array([[0.5]]), 4, "mim")


def test_bad_outputs_inside_the_loop_are_tagged_with_the_iteration() -> None:
    calls = []

    def f(x: np.ndarray) -> float:
        calls.append(x)
        return float("nan") if len(calls) > 2 else float(x[0])

    with pytest.raises(IterationError) as info:
        run_active_learning(f, np.array([[0.1], [0.7]]), 5, "mim")
    assert info.value.iteration == 2
    assert isinstance(info.value.__cause__, ValueError)


def test_runlog_csv_round_trip(tmp_path) -> None:
    log = RunLog(header={"function": "demo", "d": "2"})
    log.append(IterationRecord(0, (0.1, 0.2), 3.0, 3.0, None, 1.5))
    log.append(IterationRecord(1, (0.5, 0.5), 1.0, 1.0, None, 1.5))
    log.append(IterationRecord(2, (0.9, 0.1), 2.0, 1.0, 0.25, 4.0, perturbed=True))
    path = log.write_csv(tmp_path / "run.csv", include_timing=False, provenance={"tool": "t"})

    lines = path.read_text().splitlines()
    assert lines[0] == "# tool=t"
    assert "iter,x1,x2,y,best_y,acq_value,elapsed_ms" in lines
    assert "# duplicate_fallback_iterations=2" in lines
    assert "0,0.10000000000000001,0.20000000000000001,3,3,," in lines

    back = read_runlog(path)
    assert back.header["function"] == "demo"
    assert [r.acq_value for r in back.records] == [None, None, 0.25]
    assert back.fallback_iterations == [2]
    np.testing.assert_array_equal(back.points(), log.points())


def test_runlog_rejects_increasing_incumbent() -> None:
    log = RunLog()
    log.append(IterationRecord(0, (0.1,), 1.0, 1.0, None, 0.0))
    with pytest.raises(ValueError):
        log.append(IterationRecord(1, (0.2,), 2.0, 2.0, None, 0.0))
