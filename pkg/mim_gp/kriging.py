"""Ordinary kriging: profile-likelihood fitting and posterior prediction."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Any

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from .errors import DegenerateData, DimensionMismatch, NotPositiveDefinite
from .kernels import (
    ALPHA_BOUNDS,
    DEFAULT_NUGGET,
    THETA_BOUNDS,
    KernelFamily,
    KernelSpec,
    correlation_matrix,
    cross_correlation,
)
from .numeric import (
    BoxOptimizerConfig,
    CholeskyFactor,
    cholesky,
    maximize_box,
    solve_lower,
    solve_spd,
)

logger = logging.getLogger(__name__)

_SIGMA2_FLOOR = 1e-300


class FitOptions(BaseModel):
    """Hyperparameter search settings."""

    model_config = ConfigDict(frozen=True)

    theta_init: float = 0.1
    alpha_init: float = 1.0
    theta_bounds: tuple[float, float] = THETA_BOUNDS
    alpha_bounds: tuple[float, float] = ALPHA_BOUNDS
    nugget: float = Field(default=DEFAULT_NUGGET, ge=0.0, le=1e-2)
    restarts: int = Field(default=5, ge=1)
    seed: int = 0
    max_evals_per_start: int = Field(default=300, ge=1)
    min_step: float = Field(default=1e-3, gt=0)
    allow_degenerate: bool = True

    @model_validator(mode="after")
    def _ordered(self) -> FitOptions:
        for name in ("theta_bounds", "alpha_bounds"):
            lo, hi = getattr(self, name)
            if not (0 < lo < hi):
                raise ValueError(f"{name} must satisfy 0 < lo < hi, got ({lo}, {hi})")
        if not (self.theta_bounds[0] <= self.theta_init <= self.theta_bounds[1]):
            raise ValueError("theta_init must lie inside theta_bounds")
        if not (self.alpha_bounds[0] <= self.alpha_init <= self.alpha_bounds[1]):
            raise ValueError("alpha_init must lie inside alpha_bounds")
        return self


@dataclass(frozen=True)
class GPModel:
    """Immutable fitted ordinary-kriging surrogate."""

    design: np.ndarray
    y: np.ndarray
    spec: KernelSpec
    mu: float
    sigma2: float
    chol: CholeskyFactor
    alpha_vec: np.ndarray
    nll: float = math.nan
    constant: bool = False

    @property
    def n(self) -> int:
        return int(self.design.shape[0])

    @property
    def d(self) -> int:
        return int(self.design.shape[1])

    @property
    def family(self) -> KernelFamily:
        return self.spec.family


def _as_design(D: Any) -> np.ndarray:
    arr = np.asarray(getattr(D, "points", D), dtype=float)
    if arr.ndim != 2:
        raise DimensionMismatch(f"design must be a 2-D array, got shape {arr.shape}")
    return arr


def _as_outputs(y: Any, n: int) -> np.ndarray:
    out = np.asarray(y, dtype=float).reshape(-1)
    if out.size != n:
        raise DimensionMismatch(f"{out.size} outputs for {n} design rows")
    if not np.all(np.isfinite(out)):
        raise ValueError("outputs must be finite")
    return out


def _profile(factor: CholeskyFactor, y: np.ndarray) -> tuple[float, float, np.ndarray]:
    """Closed-form mu, sigma2 and R^{-1}(y - mu 1) for a factored R."""

    n = y.size
    ones = np.ones(n)
    r_inv_one = solve_spd(factor, ones)
    r_inv_y = solve_spd(factor, y)
    mu = float(ones @ r_inv_y / (ones @ r_inv_one))
    alpha_vec = r_inv_y - mu * r_inv_one
    resid = y - mu
    sigma2 = float(max(resid @ alpha_vec / n, 0.0))
    return mu, sigma2, alpha_vec


def concentrated_nll(spec: KernelSpec, D: Any, y: Any) -> tuple[float, float, float]:
    """Profile negative log-likelihood ``n log sigma2_hat + log det R`` with mu_hat, sigma2_hat."""

    X = _as_design(D)
    y = _as_outputs(y, X.shape[0])
    if X.shape[0] < 2:
        raise ValueError("concentrated likelihood needs at least two points")
    factor = cholesky(correlation_matrix(spec, X), spec.nugget)
    mu, sigma2, _ = _profile(factor, y)
    nll = y.size * math.log(max(sigma2, _SIGMA2_FLOOR)) + factor.log_det
    return nll, mu, sigma2


def fit_fixed(
    D: Any,
    y: Any,
    spec: KernelSpec,
    mu: float | None = None,
    sigma2: float | None = None,
) -> GPModel:
    """Build a model at fixed hyperparameters; mu and sigma2 default to their estimates."""

    X = _as_design(D)
    y = _as_outputs(y, X.shape[0])
    if X.shape[0] < 1:
        raise ValueError("a model needs at least one point")
    if X.shape[1] != spec.d:
        raise DimensionMismatch(f"design dimension {X.shape[1]} vs {spec.d} length scales")
    factor = cholesky(correlation_matrix(spec, X), spec.nugget)
    mu_hat, sigma2_hat, _ = _profile(factor, y)
    mu_used = mu_hat if mu is None else float(mu)
    sigma2_used = sigma2_hat if sigma2 is None else float(sigma2)
    if sigma2_used < 0:
        raise ValueError("sigma2 must be nonnegative")
    alpha_vec = solve_spd(factor, y - mu_used)
    nll = y.size * math.log(max(sigma2_hat, _SIGMA2_FLOOR)) + factor.log_det
    return GPModel(
        design=X.copy(),
        y=y.copy(),
        spec=spec,
        mu=mu_used,
        sigma2=sigma2_used,
        chol=factor,
        alpha_vec=alpha_vec,
        nll=nll,
        constant=bool(np.ptp(y) == 0.0),
    )


class _HyperBox:
    """Maps the unit cube onto (log theta_1..log theta_d[, alpha])."""

    def __init__(self, family: KernelFamily, d: int, options: FitOptions) -> None:
        self.family = family
        self.d = d
        self.options = options
        self.log_lo = math.log(options.theta_bounds[0])
        self.log_hi = math.log(options.theta_bounds[1])
        self.alpha_lo, self.alpha_hi = options.alpha_bounds
        self.dim = d + (1 if family.uses_alpha else 0)

    def to_spec(self, u: np.ndarray) -> KernelSpec:
        lo, hi = self.options.theta_bounds
        theta = np.clip(np.exp(self.log_lo + u[: self.d] * (self.log_hi - self.log_lo)), lo, hi)
        alpha = self.options.alpha_init
        if self.family.uses_alpha:
            raw = self.alpha_lo + u[self.d] * (self.alpha_hi - self.alpha_lo)
            alpha = float(np.clip(raw, self.alpha_lo, self.alpha_hi))
        return KernelSpec(family=self.family, theta=theta, alpha=alpha, nugget=self.options.nugget)

    def to_unit(self, spec: KernelSpec) -> np.ndarray:
        theta = np.clip(spec.theta_array, *self.options.theta_bounds)
        u = (np.log(theta) - self.log_lo) / (self.log_hi - self.log_lo)
        if self.family.uses_alpha:
            a = (min(max(spec.alpha, self.alpha_lo), self.alpha_hi) - self.alpha_lo) / (
                self.alpha_hi - self.alpha_lo
            )
            u = np.append(u, a)
        return np.clip(u, 0.0, 1.0)


def fit(
    D: Any,
    y: Any,
    family: KernelFamily | str,
    options: FitOptions | None = None,
    warm_start: KernelSpec | None = None,
) -> GPModel:
    """Maximum-likelihood fit over log theta (and alpha for IM/MIM).

    The initial point (theta_init, alpha_init) and ``warm_start`` are always among the
    polished starts, so the returned likelihood is never worse than at the initial values.
    Constant outputs yield a flagged constant model with ``sigma2 == 0``.
    """

    options = options or FitOptions()
    family = KernelFamily.parse(family)
    X = _as_design(D)
    y = _as_outputs(y, X.shape[0])
    n, d = X.shape
    if n < 2:
        raise ValueError("fit needs at least two points; use fit_fixed for a single point")
    if np.any(X < 0.0) or np.any(X > 1.0):
        raise ValueError("design rows must lie in [0, 1]^d")

    init_spec = KernelSpec.isotropic(
        family, d, options.theta_init, options.alpha_init, options.nugget
    )
    if np.ptp(y) == 0.0:
        if not options.allow_degenerate:
            raise DegenerateData("outputs are constant")
        logger.warning("constant outputs (y=%g); returning a constant model", y[0])
        model = fit_fixed(X, y, warm_start or init_spec, mu=float(y[0]), sigma2=0.0)
        return model

    box = _HyperBox(family, d, options)

    def objective(u: np.ndarray) -> float:
        try:
            nll, _, _ = concentrated_nll(box.to_spec(u), X, y)
        except NotPositiveDefinite:
            return -math.inf
        return -nll

    starts = [box.to_unit(init_spec)]
    if warm_start is not None and warm_start.d == d:
        starts.append(box.to_unit(warm_start))
    config = BoxOptimizerConfig(
        n_candidates=max(options.restarts - 1, 1),
        n_polish_starts=options.restarts + (1 if warm_start is not None else 0),
        max_polish_evals=options.max_evals_per_start,
        min_step=options.min_step,
        seed=options.seed,
    )
    best = maximize_box(objective, box.dim, config, starts=starts)
    if not math.isfinite(best.value):
        raise NotPositiveDefinite("correlation matrix singular at every start")
    spec = box.to_spec(best.x)
    model = fit_fixed(X, y, spec)
    logger.debug(
        "fit %s n=%d nll=%.6g theta=%s alpha=%.4g",
        family.value,
        n,
        model.nll,
        np.array2string(spec.theta_array, precision=4),
        spec.alpha,
    )
    return model


def _query(model: GPModel, X: Any) -> np.ndarray:
    pts = np.asarray(X, dtype=float)
    if pts.ndim == 1:
        pts = pts.reshape(1, -1) if pts.size else pts.reshape(0, model.d)
    if pts.shape[1] != model.d:
        raise DimensionMismatch(f"query dimension {pts.shape[1]} vs model dimension {model.d}")
    return pts


def variance_reduction(model: GPModel, X: Any) -> np.ndarray:
    """r(x)' R^{-1} r(x) for each query row, via one triangular solve."""

    pts = _query(model, getattr(X, "points", X))
    if pts.shape[0] == 0:
        return np.zeros(0)
    V = solve_lower(model.chol, cross_correlation(model.spec, model.design, pts))
    return np.einsum("ij,ij->j", V, V)


def batch_predict(model: GPModel, X: Any) -> tuple[np.ndarray, np.ndarray]:
    """Posterior means and variances for each row of ``X``."""

    pts = _query(model, getattr(X, "points", X))
    if pts.shape[0] == 0:
        return np.zeros(0), np.zeros(0)
    r = cross_correlation(model.spec, model.design, pts)
    y_hat = model.mu + r.T @ model.alpha_vec
    V = solve_lower(model.chol, r)
    quad = np.einsum("ij,ij->j", V, V)
    s2 = model.sigma2 * np.maximum(0.0, 1.0 - quad)
    return y_hat, s2


def predict(model: GPModel, x: Any) -> tuple[float, float]:
    """Posterior mean and variance at a single point."""

    point = np.asarray(x, dtype=float).ravel()
    if point.size != model.d:
        raise DimensionMismatch(f"query dimension {point.size} vs model dimension {model.d}")
    y_hat, s2 = batch_predict(model, point[None, :])
    return float(y_hat[0]), float(s2[0])
