"""Correlation kernels on the unit hypercube.

All kernels are written in unit-cube coordinates with per-coordinate length scales
``theta``. The nugget is part of :class:`KernelSpec` but only enters the diagonal of
:func:`correlation_matrix`; point-to-point evaluations never include it.
"""

from __future__ import annotations

from enum import Enum
from typing import Any

import numpy as np
from pydantic import BaseModel, ConfigDict, field_validator, model_validator

from .errors import DimensionMismatch

THETA_BOUNDS = (1e-3, 1e3)
ALPHA_BOUNDS = (0.01, 3.0)
NUGGET_MAX = 1e-2
DEFAULT_NUGGET = 1e-6

_SLACK = 1e-9


class KernelFamily(str, Enum):
    """Supported correlation families."""

    GAUSSIAN = "gaussian"
    IM = "im"
    MIM = "mim"
    EXP_PRODUCT = "exp"

    @property
    def uses_alpha(self) -> bool:
        return self in (KernelFamily.IM, KernelFamily.MIM)

    @classmethod
    def parse(cls, name: str | KernelFamily) -> KernelFamily:
        if isinstance(name, KernelFamily):
            return name
        aliases = {
            "gauss": cls.GAUSSIAN,
            "gaussian": cls.GAUSSIAN,
            "im": cls.IM,
            "mim": cls.MIM,
            "exp": cls.EXP_PRODUCT,
            "expproduct": cls.EXP_PRODUCT,
            "exp_product": cls.EXP_PRODUCT,
            "matern12": cls.EXP_PRODUCT,
        }
        key = str(name).strip().lower()
        if key not in aliases:
            raise ValueError(f"unknown kernel family {name!r}; choose from {sorted(aliases)}")
        return aliases[key]


class KernelSpec(BaseModel):
    """Kernel family plus hyperparameters (theta_1..theta_d, alpha, nugget)."""

    model_config = ConfigDict(frozen=True)

    family: KernelFamily
    theta: tuple[float, ...]
    alpha: float = 1.0
    nugget: float = DEFAULT_NUGGET

    @field_validator("family", mode="before")
    @classmethod
    def _parse_family(cls, value: Any) -> KernelFamily:
        return KernelFamily.parse(value)

    @field_validator("theta", mode="before")
    @classmethod
    def _coerce_theta(cls, value: Any) -> tuple[float, ...]:
        return tuple(float(v) for v in np.ravel(np.asarray(value, dtype=float)))

    @field_validator("theta")
    @classmethod
    def _check_theta(cls, value: tuple[float, ...]) -> tuple[float, ...]:
        if not value:
            raise ValueError("theta must hold at least one length scale")
        lo, hi = THETA_BOUNDS
        for t in value:
            if not (lo * (1 - _SLACK) <= t <= hi * (1 + _SLACK)):
                raise ValueError(f"theta entries must lie in [{lo}, {hi}], got {t}")
        return value

    @field_validator("nugget")
    @classmethod
    def _check_nugget(cls, value: float) -> float:
        if not (0.0 <= value <= NUGGET_MAX):
            raise ValueError(f"nugget must lie in [0, {NUGGET_MAX}], got {value}")
        return value

    @model_validator(mode="after")
    def _check_alpha(self) -> KernelSpec:
        if self.alpha <= 0:
            raise ValueError(f"alpha must be positive, got {self.alpha}")
        if self.family.uses_alpha:
            lo, hi = ALPHA_BOUNDS
            if not (lo * (1 - _SLACK) <= self.alpha <= hi * (1 + _SLACK)):
                raise ValueError(f"alpha must lie in [{lo}, {hi}] for {self.family.value}")
        return self

    @classmethod
    def isotropic(
        cls,
        family: KernelFamily | str,
        d: int,
        theta: float,
        alpha: float = 1.0,
        nugget: float = DEFAULT_NUGGET,
    ) -> KernelSpec:
        return cls(family=family, theta=(float(theta),) * d, alpha=alpha, nugget=nugget)

    @property
    def d(self) -> int:
        return len(self.theta)

    @property
    def theta_array(self) -> np.ndarray:
        return np.asarray(self.theta, dtype=float)

    def replace(self, **changes: Any) -> KernelSpec:
        """Return a validated copy with ``changes`` applied."""

        data = self.model_dump()
        data.update(changes)
        return type(self).model_validate(data)


def _points(D: Any) -> np.ndarray:
    points = getattr(D, "points", D)
    arr = np.asarray(points, dtype=float)
    if arr.ndim == 1:
        arr = arr.reshape(1, -1) if arr.size else arr.reshape(0, 0)
    return arr


def _check_dims(spec: KernelSpec, *arrays: np.ndarray) -> None:
    for arr in arrays:
        if arr.shape[-1] != spec.d and arr.size:
            raise DimensionMismatch(
                f"point dimension {arr.shape[-1]} does not match {spec.d} length scales"
            )


def cross_correlation(spec: KernelSpec, A: Any, B: Any) -> np.ndarray:
    """Correlations between every row of ``A`` and every row of ``B`` (no nugget)."""

    a = _points(A)
    b = _points(B)
    if a.size == 0 or b.size == 0:
        return np.zeros((a.shape[0], b.shape[0]), dtype=float)
    _check_dims(spec, a, b)
    scaled = (a[:, None, :] - b[None, :, :]) / spec.theta_array
    family = spec.family
    if family is KernelFamily.GAUSSIAN:
        return np.exp(-np.sum(scaled**2, axis=-1))
    if family is KernelFamily.IM:
        return (1.0 + np.sum(scaled**2, axis=-1)) ** (-spec.alpha)
    if family is KernelFamily.MIM:
        return np.prod((1.0 + scaled**2) ** (-spec.alpha), axis=-1)
    return np.exp(-np.sum(np.abs(scaled), axis=-1))


def log_cross_correlation(spec: KernelSpec, A: Any, B: Any) -> np.ndarray:
    """Natural log of :func:`cross_correlation`, computed without underflow."""

    a = _points(A)
    b = _points(B)
    if a.size == 0 or b.size == 0:
        return np.zeros((a.shape[0], b.shape[0]), dtype=float)
    _check_dims(spec, a, b)
    scaled = (a[:, None, :] - b[None, :, :]) / spec.theta_array
    family = spec.family
    if family is KernelFamily.GAUSSIAN:
        return -np.sum(scaled**2, axis=-1)
    if family is KernelFamily.IM:
        return -spec.alpha * np.log1p(np.sum(scaled**2, axis=-1))
    if family is KernelFamily.MIM:
        return -spec.alpha * np.sum(np.log1p(scaled**2), axis=-1)
    return -np.sum(np.abs(scaled), axis=-1)


def eval_kernel(spec: KernelSpec, xi: Any, xj: Any) -> float:
    """Closed-form correlation between two points."""

    a = np.asarray(xi, dtype=float).ravel()
    b = np.asarray(xj, dtype=float).ravel()
    if a.shape != b.shape:
        raise DimensionMismatch(f"points have dimensions {a.size} and {b.size}")
    return float(cross_correlation(spec, a[None, :], b[None, :])[0, 0])


def correlation_matrix(spec: KernelSpec, D: Any) -> np.ndarray:
    """Symmetric correlation matrix with ``1 + nugget`` on the diagonal."""

    points = _points(D)
    R = cross_correlation(spec, points, points)
    R = 0.5 * (R + R.T)
    np.fill_diagonal(R, 1.0 + spec.nugget)
    return R


def correlation_vector(spec: KernelSpec, D: Any, x: Any) -> np.ndarray:
    """Vector r(x) of correlations between ``x`` and each design row."""

    points = _points(D)
    point = np.asarray(x, dtype=float).ravel()
    if points.shape[0] == 0:
        return np.zeros(0, dtype=float)
    if point.size != spec.d:
        raise DimensionMismatch(f"point dimension {point.size} does not match {spec.d}")
    return cross_correlation(spec, points, point[None, :])[:, 0]
