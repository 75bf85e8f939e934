"""Small-length-scale limits of the ALM variance reduction.

For the isotropic IM kernel, r(x)'R^{-1}r(x) / theta^{4 alpha} tends to
sum_i ||x - x_i||^{-4 alpha} as theta -> 0 (sequential maximin). For the MIM kernel with
equal theta_k, r(x)'R^{-1}r(x) prod_k theta_k^{-4 alpha} tends to
sum_i prod_k |x_k - x_ik|^{-4 alpha} (sequential MaxPro). Both sides are accumulated in
log space; the quadratic form is computed directly with one triangular solve.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Sequence
from dataclasses import dataclass, field
from enum import Enum
from typing import Any

import numpy as np
from scipy.special import logsumexp

from mim_gp.errors import CoordinateCollision, NotPositiveDefinite, PointInDesign
from mim_gp.kernels import KernelFamily, KernelSpec, correlation_matrix, log_cross_correlation
from mim_gp.numeric import cholesky, solve_lower

logger = logging.getLogger(__name__)

DEFAULT_THETAS = (1e-1, 1e-2, 1e-3)
MIN_SEPARATION = 1e-3
FALLBACK_NUGGET = 1e-12


class CriterionKind(str, Enum):
    MAXIMIN = "maximin"
    MAXPRO = "maxpro"


@dataclass(frozen=True)
class LimitCheckReport:
    """lhs at each theta against the theta -> 0 limit ``rhs``."""

    theorem: str
    theta_sequence: tuple[float, ...]
    lhs_values: tuple[float, ...]
    rhs_value: float
    relative_errors: tuple[float, ...]
    tolerance: float
    jitter_flags: tuple[bool, ...] = field(default_factory=tuple)

    def __post_init__(self) -> None:
        thetas = np.asarray(self.theta_sequence)
        if thetas.size == 0 or np.any(np.diff(thetas) >= 0) or np.any(thetas <= 0):
            raise ValueError("theta_sequence must be strictly decreasing and positive")
        if not self.rhs_value > 0:
            raise ValueError("rhs_value must be positive")

    @property
    def converged(self) -> bool:
        return self.relative_errors[-1] <= self.tolerance

    @property
    def final_error(self) -> float:
        return self.relative_errors[-1]


def _points(D: Any) -> np.ndarray:
    return np.asarray(getattr(D, "points", D), dtype=float)


def log_quadratic_form(spec: KernelSpec, D: Any, x: Any) -> tuple[float, bool]:
    """log(r(x)'R^{-1}r(x)) with r rescaled by its largest entry before the solve.

    Returns the value and whether jitter had to be added to factor R (nugget 0 first).
    """

    X = _points(D)
    log_r = log_cross_correlation(spec, X, np.asarray(x, dtype=float).reshape(1, -1))[:, 0]
    shift = float(np.max(log_r))
    r = np.exp(log_r - shift)
    R = correlation_matrix(spec, X)
    jittered = False
    try:
        factor = cholesky(R, spec.nugget)
    except NotPositiveDefinite:
        logger.warning("R singular at theta=%g; retrying with jitter", spec.theta[0])
        R = R + (FALLBACK_NUGGET - spec.nugget) * np.eye(R.shape[0])
        factor = cholesky(R, FALLBACK_NUGGET)
        jittered = True
    v = solve_lower(factor, r)
    return 2.0 * shift + math.log(float(v @ v)), jittered


def log_sequential_criterion(D: Any, x: Any, alpha: float, kind: CriterionKind | str) -> float:
    """log of sum_i ||x - x_i||^{-4a} (maximin) or sum_i prod_k |x_k - x_ik|^{-4a} (maxpro)."""

    kind = CriterionKind(kind)
    X = _points(D)
    point = np.asarray(x, dtype=float).ravel()
    diff = np.abs(X - point)
    with np.errstate(divide="ignore"):
        if kind is CriterionKind.MAXIMIN:
            log_terms = -2.0 * alpha * np.log(np.sum(diff**2, axis=1))
        else:
            log_terms = -4.0 * alpha * np.sum(np.log(diff), axis=1)
    if np.any(np.isposinf(log_terms)):
        return math.inf
    return float(logsumexp(log_terms))


def sequential_criterion(D: Any, x: Any, alpha: float, kind: CriterionKind | str) -> float:
    """Sequential maximin / MaxPro criterion; +inf when x collides with the design."""

    value = log_sequential_criterion(D, x, alpha, kind)
    if value == math.inf or value > 709.0:
        return math.inf
    return math.exp(value)


def _check(
    theorem: str,
    family: KernelFamily,
    D: Any,
    x: Any,
    alpha: float,
    theta_seq: Sequence[float],
    tol: float,
    kind: CriterionKind,
) -> LimitCheckReport:
    X = _points(D)
    d = X.shape[1]
    log_rhs = log_sequential_criterion(X, x, alpha, kind)
    lhs_values: list[float] = []
    errors: list[float] = []
    flags: list[bool] = []
    for theta in theta_seq:
        spec = KernelSpec.isotropic(family, d, theta, alpha, nugget=0.0)
        log_quad, jittered = log_quadratic_form(spec, X, x)
        scale = 4.0 * alpha * math.log(theta) * (d if kind is CriterionKind.MAXPRO else 1)
        log_lhs = log_quad - scale
        lhs_values.append(math.exp(min(log_lhs, 709.0)))
        errors.append(abs(math.expm1(log_lhs - log_rhs)))
        flags.append(jittered)
    return LimitCheckReport(
        theorem=theorem,
        theta_sequence=tuple(float(t) for t in theta_seq),
        lhs_values=tuple(lhs_values),
        rhs_value=math.exp(min(log_rhs, 709.0)),
        relative_errors=tuple(errors),
        tolerance=tol,
        jitter_flags=tuple(flags),
    )


def theorem1_check(
    D: Any,
    x: Any,
    alpha: float,
    theta_seq: Sequence[float] = DEFAULT_THETAS,
    tol: float = 0.01,
) -> LimitCheckReport:
    """IM kernel: r'R^{-1}r / theta^{4a} against sum_i ||x - x_i||^{-4a}."""

    X = _points(D)
    point = np.asarray(x, dtype=float).ravel()
    dist = np.max(np.abs(X - point), axis=1)
    if np.any(dist < MIN_SEPARATION):
        raise PointInDesign(
            f"x lies within {MIN_SEPARATION} (inf-norm) of design row {int(np.argmin(dist)) + 1}"
        )
    return _check(
        "theorem1", KernelFamily.IM, X, point, alpha, theta_seq, tol, CriterionKind.MAXIMIN
    )


def theorem2_check(
    D: Any,
    x: Any,
    alpha: float,
    theta_seq: Sequence[float] = DEFAULT_THETAS,
    tol: float = 0.01,
) -> LimitCheckReport:
    """MIM kernel: r'R^{-1}r prod_k theta^{-4a} against sum_i prod_k |x_k - x_ik|^{-4a}."""

    X = _points(D)
    point = np.asarray(x, dtype=float).ravel()
    gaps = np.abs(X - point)
    if np.any(gaps < MIN_SEPARATION):
        row, col = (int(v) for v in np.argwhere(gaps < MIN_SEPARATION)[0])
        raise CoordinateCollision(
            f"x is within {MIN_SEPARATION} of design row {row + 1} in coordinate {col + 1}"
        )
    return _check(
        "theorem2", KernelFamily.MIM, X, point, alpha, theta_seq, tol, CriterionKind.MAXPRO
    )


@dataclass(frozen=True)
class SandwichResult:
    lower: float
    quad: float
    upper: float
    lambda_min: float
    lambda_max: float
    jitter_used: float = 0.0

    def holds(self, slack: float = 1e-10) -> bool:
        scale = max(abs(self.upper), 1.0)
        return self.lower - slack * scale <= self.quad <= self.upper + slack * scale

    def __iter__(self):
        return iter((self.lower, self.quad, self.upper))


def sandwich_check(spec: KernelSpec, D: Any, x: Any) -> SandwichResult:
    """r'r / lambda_max <= r'R^{-1}r <= r'r / lambda_min with dense eigenvalues of R.

    The eigenvalues are taken from the matrix the Cholesky factor was built on, so any
    escalated jitter enters both sides.
    """

    X = _points(D)
    if X.shape[0] > 100:
        raise ValueError("sandwich_check uses dense eigenvalues; n must be <= 100")
    point = np.asarray(x, dtype=float).reshape(1, -1)
    r = np.exp(log_cross_correlation(spec, X, point)[:, 0])
    R = correlation_matrix(spec, X)
    factor = cholesky(R, spec.nugget)
    R_used = R + (factor.jitter_used - spec.nugget) * np.eye(R.shape[0])
    eigenvalues = np.linalg.eigvalsh(R_used)
    lam_min, lam_max = float(eigenvalues[0]), float(eigenvalues[-1])
    v = solve_lower(factor, r)
    rr = float(r @ r)
    result = SandwichResult(
        lower=rr / lam_max,
        quad=float(v @ v),
        upper=rr / lam_min,
        lambda_min=lam_min,
        lambda_max=lam_max,
        jitter_used=factor.jitter_used,
    )
    if not result.holds():
        raise AssertionError(
            f"eigenvalue sandwich violated: {result.lower} <= {result.quad} <= {result.upper}"
        )
    return result
