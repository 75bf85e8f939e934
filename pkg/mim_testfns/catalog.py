"""Unit-cube wrappers, inert-variable augmentation and the named catalog."""

from __future__ import annotations

import re
from collections.abc import Callable
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from mim_gp.errors import ConfigError, DimensionMismatch

from . import functions as fns

NativeFn = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class KnownMinimum:
    value: float
    location: tuple[float, ...]


@dataclass(frozen=True)
class TestFunction:
    """A named black box on [0, 1]^d_total; the first d_native coordinates are active."""

    __test__ = False

    name: str
    native: NativeFn
    domain: tuple[tuple[float, float], ...]
    d_total: int
    known_min: KnownMinimum | None = None

    def __post_init__(self) -> None:
        if self.d_total < self.d_native:
            raise ValueError(f"{self.name}: d_total {self.d_total} < d_native {self.d_native}")

    @property
    def d_native(self) -> int:
        return len(self.domain)

    @property
    def lower(self) -> np.ndarray:
        return np.array([lo for lo, _ in self.domain])

    @property
    def upper(self) -> np.ndarray:
        return np.array([hi for _, hi in self.domain])

    def to_native(self, u: np.ndarray) -> np.ndarray:
        u = np.asarray(u, dtype=float)
        active = u[..., : self.d_native]
        return self.lower + active * (self.upper - self.lower)

    def to_unit(self, x: np.ndarray) -> np.ndarray:
        """Native active coordinates to the unit cube (inert coordinates set to 0.5)."""

        x = np.asarray(x, dtype=float)
        u = np.full(x.shape[:-1] + (self.d_total,), 0.5)
        u[..., : self.d_native] = (x - self.lower) / (self.upper - self.lower)
        return u

    def eval_native(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        return self.native(np.atleast_2d(x))

    def __call__(self, u: np.ndarray) -> float | np.ndarray:
        return eval_unit(self, u)


def eval_unit(fn: TestFunction, u: np.ndarray) -> float | np.ndarray:
    """Evaluate at unit-cube point(s); a 1-D input returns a float, a 2-D input an array."""

    arr = np.asarray(u, dtype=float)
    single = arr.ndim == 1
    pts = np.atleast_2d(arr)
    if pts.shape[1] != fn.d_total:
        raise DimensionMismatch(f"{fn.name} takes {fn.d_total} inputs, got {pts.shape[1]}")
    if np.any(pts < 0.0) or np.any(pts > 1.0) or not np.all(np.isfinite(pts)):
        raise ValueError(f"{fn.name}: inputs must lie in [0, 1]^{fn.d_total}")
    values = fn.native(fn.to_native(pts))
    return float(values[0]) if single else values


# ---- catalog ----------------------------------------------------------------------

_SCALABLE: dict[str, tuple[NativeFn, tuple[float, float], Callable[[int], KnownMinimum]]] = {
    "levy": (fns.levy, (-10.0, 10.0), lambda d: KnownMinimum(0.0, (1.0,) * d)),
    "ackley": (fns.ackley, (-32.768, 32.768), lambda d: KnownMinimum(0.0, (0.0,) * d)),
    "rastrigin": (fns.rastrigin, (-5.12, 5.12), lambda d: KnownMinimum(0.0, (0.0,) * d)),
}

_FIXED: dict[str, tuple[NativeFn, tuple[tuple[float, float], ...]]] = {
    "friedman": (fns.friedman, ((0.0, 1.0),) * 5),
    "dette": (fns.dette_pepelyshev, ((0.0, 1.0),) * 8),
    "otl": (fns.otl_circuit, fns.OTL_DOMAIN),
    "piston": (fns.piston, fns.PISTON_DOMAIN),
    "robot": (fns.robot_arm, fns.ROBOT_DOMAIN),
    "wing": (fns.wing_weight, fns.WING_DOMAIN),
}

EMULATION_SET = (
    "dette_aug10",
    "friedman_aug10",
    "otl_aug10",
    "piston_aug10",
    "robot_aug10",
    "wing",
)
OPTIMIZATION_SET = (
    "ackley6",
    "ackley6_aug10",
    "levy6",
    "levy6_aug10",
    "rastrigin6",
    "rastrigin6_aug10",
)
EXTRA_SET = ("levy2", "levy4_aug6")

_NAME = re.compile(r"^(?P<base>[a-z]+?)(?P<active>\d+)?(?:_aug(?P<total>\d+))?$")


@lru_cache(maxsize=None)
def get_function(name: str) -> TestFunction:
    """Resolve ``<name>[<active>][_aug<total>]``, e.g. ``levy6_aug10`` or ``friedman_aug10``."""

    match = _NAME.match(name.strip().lower())
    if not match:
        raise ConfigError(f"unrecognized function name {name!r}")
    base, active, total = match["base"], match["active"], match["total"]
    if base in _SCALABLE:
        if active is None:
            raise ConfigError(f"{base} needs an active dimension count, e.g. {base}6")
        d = int(active)
        if d < 1:
            raise ConfigError("active dimension count must be >= 1")
        native, box, known = _SCALABLE[base]
        domain: tuple[tuple[float, float], ...] = (box,) * d
        known_min: KnownMinimum | None = known(d)
    elif base in _FIXED:
        if active is not None:
            raise ConfigError(f"{base} has a fixed dimension; drop {active!r} from the name")
        native, domain = _FIXED[base]
        known_min = None
    else:
        raise ConfigError(f"unknown function {base!r}; known: {sorted({**_SCALABLE, **_FIXED})}")
    d_total = int(total) if total else len(domain)
    if d_total < len(domain):
        raise ConfigError(f"{name}: total dimension {d_total} below native {len(domain)}")
    return TestFunction(
        name=name.strip().lower(),
        native=native,
        domain=domain,
        d_total=d_total,
        known_min=known_min,
    )


def catalog() -> list[TestFunction]:
    """All benchmark variants: the emulation set at d=10, the optimization set at d=6 and 10."""

    return [get_function(name) for name in (*EMULATION_SET, *OPTIMIZATION_SET, *EXTRA_SET)]
