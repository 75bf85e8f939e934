from __future__ import annotations

import math

import numpy as np
import pytest

from mim_design.lhd import maxpro_design
from mim_gp.errors import DegenerateData, DesignFormatError, DimensionMismatch
from mim_gp.kernels import KernelSpec, correlation_matrix, correlation_vector
from mim_gp.kriging import (
    FitOptions,
    batch_predict,
    concentrated_nll,
    fit,
    fit_fixed,
    predict,
)
from mim_gp.model_io import dumps_model, load_model, loads_model, save_model
from mim_testfns import get_function


def _data(n: int = 5, d: int = 2, seed: int = 0) -> tuple[np.ndarray, np.ndarray]:
    rng = np.random.default_rng(seed)
    D = rng.random((n, d))
    return D, np.sin(3 * D[:, 0]) + D[:, 1] ** 2


def _oracle(spec: KernelSpec, D: np.ndarray, y: np.ndarray, x: np.ndarray) -> tuple[float, float]:
    R_inv = np.linalg.inv(correlation_matrix(spec, D))
    one = np.ones(len(y))
    mu = float(one @ R_inv @ y / (one @ R_inv @ one))
    sigma2 = float((y - mu) @ R_inv @ (y - mu) / len(y))
    r = correlation_vector(spec, D, x)
    return mu + float(r @ R_inv @ (y - mu)), sigma2 * max(0.0, 1.0 - float(r @ R_inv @ r))


def test_constant_outputs_give_zero_variance() -> None:
    D, _ = _data()
    _, mu, sigma2 = concentrated_nll(KernelSpec.isotropic("gaussian", 2, 0.3), D, np.full(5, 3.0))
    assert mu == pytest.approx(3.0)
    assert sigma2 == pytest.approx(0.0, abs=1e-20)


def test_nll_with_uncorrelated_points() -> None:
    D = np.array([[0.2, 0.2], [0.8, 0.8]])
    spec = KernelSpec.isotropic("mim", 2, 1e-3)
    nll, mu, sigma2 = concentrated_nll(spec, D, np.array([1.0, 3.0]))
    assert mu == pytest.approx(2.0)
    assert sigma2 == pytest.approx(1.0, rel=1e-5)
    assert nll == pytest.approx(2 * math.log(sigma2) + 2 * math.log(1 + 1e-6), abs=1e-8)


def test_nll_is_shift_invariant() -> None:
    D, y = _data(6)
    spec = KernelSpec.isotropic("mim", 2, 0.4, alpha=1.3)
    nll, mu, sigma2 = concentrated_nll(spec, D, y)
    nll_s, mu_s, sigma2_s = concentrated_nll(spec, D, y + 7.5)
    assert nll_s == pytest.approx(nll, rel=1e-9)
    assert sigma2_s == pytest.approx(sigma2, rel=1e-9)
    assert mu_s == pytest.approx(mu + 7.5, rel=1e-12)


@pytest.mark.parametrize("family", ["gaussian", "im", "mim", "exp"])
def test_predict_matches_dense_oracle(family: str) -> None:
    D, y = _data(5)
    spec = KernelSpec(family=family, theta=(0.3, 0.5), alpha=1.2)
    model = fit_fixed(D, y, spec)
    for x in np.random.default_rng(9).random((3, 2)):
        y_hat, s2 = predict(model, x)
        want_y, want_s2 = _oracle(spec, D, y, x)
        assert y_hat == pytest.approx(want_y, rel=1e-6)
        assert s2 == pytest.approx(want_s2, rel=1e-6, abs=1e-12)


def test_model_interpolates_training_points() -> None:
    D, y = _data(5)
    model = fit_fixed(D, y, KernelSpec.isotropic("mim", 2, 0.3))
    y_hat, s2 = batch_predict(model, D)
    assert np.max(np.abs(y_hat - y)) <= 1e-3 * np.ptp(y)
    assert np.all(s2 <= 1e-4 * model.sigma2)


def test_prediction_far_from_data_reverts_to_prior() -> None:
    D = np.array([[0.0, 0.0], [0.05, 0.1], [0.1, 0.02]])
    model = fit_fixed(D, np.array([1.0, 2.0, 0.5]), KernelSpec.isotropic("gaussian", 2, 0.01))
    y_hat, s2 = predict(model, [0.9, 0.9])
    sigma = math.sqrt(model.sigma2)
    assert abs(y_hat - model.mu) <= 1e-5 * sigma
    assert abs(s2 - model.sigma2) <= 1e-5 * model.sigma2


def test_single_point_fixed_model() -> None:
    spec = KernelSpec.isotropic("mim", 1, 0.3)
    model = fit_fixed(np.array([[0.5]]), np.array([2.0]), spec, mu=1.0, sigma2=4.0)
    y_hat, s2 = predict(model, [0.8])
    corr = 0.5
    assert y_hat == pytest.approx(1.0 + corr * 1.0 / (1 + 1e-6), rel=1e-12)
    assert s2 == pytest.approx(4.0 * (1.0 - corr**2 / (1 + 1e-6)), rel=1e-12)


def test_batch_predict_shapes_and_scalar_agreement() -> None:
    D, y = _data(5)
    model = fit_fixed(D, y, KernelSpec.isotropic("gaussian", 2, 0.4))
    y_hat, s2 = batch_predict(model, np.zeros((0, 2)))
    assert y_hat.shape == (0,) and s2.shape == (0,)
    x = np.array([[0.3, 0.6]])
    assert (batch_predict(model, x)[0][0], batch_predict(model, x)[1][0]) == predict(model, x[0])
    with pytest.raises(DimensionMismatch):
        predict(model, [0.1, 0.2, 0.3])


def test_variance_is_bounded() -> None:
    D, y = _data(6)
    model = fit_fixed(D, y, KernelSpec.isotropic("mim", 2, 0.2, alpha=0.5))
    _, s2 = batch_predict(model, np.random.default_rng(1).random((200, 2)))
    assert np.all(s2 >= 0)
    assert np.all(s2 <= model.sigma2 * (1 + 1e-6))


def test_shift_and_scale_equivariance() -> None:
    D, y = _data(6)
    spec = KernelSpec.isotropic("mim", 2, 0.35, alpha=1.1)
    base = fit_fixed(D, y, spec)
    shifted = fit_fixed(D, y + 4.0, spec)
    scaled = fit_fixed(D, 3.0 * y, spec)
    X = np.random.default_rng(2).random((10, 2))
    y0, s0 = batch_predict(base, X)
    y1, s1 = batch_predict(shifted, X)
    y2, s2 = batch_predict(scaled, X)
    assert shifted.mu == pytest.approx(base.mu + 4.0)
    assert shifted.sigma2 == pytest.approx(base.sigma2, rel=1e-9)
    np.testing.assert_allclose(y1, y0 + 4.0, rtol=1e-9)
    np.testing.assert_allclose(s1, s0, rtol=1e-7, atol=1e-15)
    assert scaled.sigma2 == pytest.approx(9.0 * base.sigma2, rel=1e-9)
    np.testing.assert_allclose(y2, 3.0 * y0, rtol=1e-9)
    np.testing.assert_allclose(s2, 9.0 * s0, rtol=1e-7, atol=1e-15)


def test_fit_improves_on_initial_hyperparameters() -> None:
    D = maxpro_design(20, 2, seed=1, iters=300)
    y = np.asarray(get_function("levy2")(D.points))
    options = FitOptions(seed=3)
    model = fit(D, y, "mim", options)
    nll0, _, _ = concentrated_nll(KernelSpec.isotropic("mim", 2, 0.1, 1.0), D.points, y)
    assert model.nll <= nll0 + 1e-6 + 1e-8 * abs(nll0)
    assert model.spec.family.value == "mim"
    assert 0.01 <= model.spec.alpha <= 3.0


def test_fit_is_deterministic_for_a_seed() -> None:
    D, y = _data(8, seed=4)
    a = fit(D, y, "gaussian", FitOptions(seed=7, restarts=3))
    b = fit(D, y, "gaussian", FitOptions(seed=7, restarts=3))
    assert a.spec == b.spec
    assert a.nll == b.nll


def test_constant_outputs_fit_to_constant_model() -> None:
    D, _ = _data(5)
    model = fit(D, np.full(5, 2.5), "mim")
    assert model.constant
    assert model.sigma2 == 0.0
    assert predict(model, [0.3, 0.3]) == pytest.approx((2.5, 0.0))
    with pytest.raises(DegenerateData):
        fit(D, np.full(5, 2.5), "mim", FitOptions(allow_degenerate=False))


def test_fit_rejects_bad_input() -> None:
    with pytest.raises(ValueError):
        fit(np.array([[0.5, 0.5]]), np.array([1.0]), "mim")
    with pytest.raises(ValueError):
        fit(np.array([[0.5, 1.5], [0.1, 0.2]]), np.array([1.0, 2.0]), "mim")
    with pytest.raises(DimensionMismatch):
        fit(np.array([[0.5, 0.5], [0.1, 0.2]]), np.array([1.0, 2.0, 3.0]), "mim")


def test_model_file_reproduces_predictions(tmp_path) -> None:
    D, y = _data(6)
    model = fit_fixed(D, y, KernelSpec(family="mim", theta=(0.21, 0.7), alpha=1.7))
    path = save_model(model, tmp_path / "model.txt")
    assert path.read_text().startswith("gpmodel v1 family=mim d=2 n=6")
    loaded = load_model(path)
    X = np.random.default_rng(8).random((20, 2))
    np.testing.assert_allclose(batch_predict(loaded, X)[0], batch_predict(model, X)[0], rtol=1e-12)
    np.testing.assert_allclose(batch_predict(loaded, X)[1], batch_predict(model, X)[1], rtol=1e-12)
    assert loaded.spec == model.spec


def test_model_text_rejects_unknown_header() -> None:
    D, y = _data(3)
    text = dumps_model(fit_fixed(D, y, KernelSpec.isotropic("gaussian", 2, 0.3)))
    with pytest.raises(DesignFormatError):
        loads_model(text.replace("gpmodel v1", "gpmodel v9", 1))
