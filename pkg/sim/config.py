"""Experiment configuration: conditions, budgets, seeds and key=value config files."""

from __future__ import annotations

import re
from enum import Enum
from pathlib import Path

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from mim_design.factory import default_size, n_rows
from mim_design.matrix import DesignGenerator
from mim_gp.errors import ConfigError
from mim_gp.kernels import KernelFamily
from mim_learn.acquisition import AcquisitionKind
from mim_testfns.catalog import get_function


class ExperimentKind(str, Enum):
    EMULATE = "emulate"
    OPTIMIZE = "optimize"

    @property
    def metric(self) -> str:
        return "mse" if self is ExperimentKind.EMULATE else "gap"

    @property
    def acquisition(self) -> AcquisitionKind:
        return AcquisitionKind.ALM if self is ExperimentKind.EMULATE else AcquisitionKind.EI


_CONDITION = re.compile(
    r"^(?P<generator>[a-z]+)(?::(?P<size>\d+)(?P<per_dim>d)?)?\+(?P<family>[a-z_0-9]+)$"
)


class Condition(BaseModel):
    """One design/kernel combination, written ``<generator>[:<size>]+<family>``.

    ``size`` is l for OFAT-family generators and the run count otherwise; a ``d`` suffix
    multiplies it by the function's total dimension.
    """

    model_config = ConfigDict(frozen=True)

    generator: DesignGenerator
    family: KernelFamily
    size: int | None = Field(default=None, ge=1)
    per_dim: bool = False

    @field_validator("family", mode="before")
    @classmethod
    def _family(cls, value: object) -> KernelFamily:
        return KernelFamily.parse(value)  # type: ignore[arg-type]

    @field_validator("generator")
    @classmethod
    def _generated(cls, value: DesignGenerator) -> DesignGenerator:
        if value is DesignGenerator.IMPORTED:
            raise ValueError("benchmark conditions need a generated design")
        return value

    @classmethod
    def parse(cls, text: str) -> Condition:
        match = _CONDITION.match(text.strip().lower())
        if not match:
            raise ConfigError(
                f"bad condition {text!r}; expected <generator>[:<size>[d]]+<kernel>, "
                "e.g. mofat:4+mim or maxpro:10d+gaussian"
            )
        try:
            return cls(
                generator=match["generator"],
                family=match["family"],
                size=int(match["size"]) if match["size"] else None,
                per_dim=bool(match["per_dim"]),
            )
        except ValueError as exc:
            raise ConfigError(f"bad condition {text!r}: {exc}") from exc

    @property
    def label(self) -> str:
        if self.size is None:
            return f"{self.generator.value}+{self.family.value}"
        suffix = "d" if self.per_dim else ""
        return f"{self.generator.value}:{self.size}{suffix}+{self.family.value}"

    def design_size(self, d: int) -> int:
        """Generator size argument (l or run count) for a d-dimensional function."""

        if self.size is None:
            return default_size(self.generator, d)
        return self.size * d if self.per_dim else self.size

    def initial_runs(self, d: int) -> int:
        return n_rows(self.generator, d, self.design_size(d))


DEFAULT_CONDITIONS: dict[ExperimentKind, tuple[str, ...]] = {
    ExperimentKind.EMULATE: ("mofat+mim", "mofat+gaussian", "maxpro+mim", "maxpro+gaussian"),
    ExperimentKind.OPTIMIZE: (
        "mofat+mim",
        "mofat+gaussian",
        "maxpro+mim",
        "maxpro+gaussian",
        "maxpro:10d+gaussian",
    ),
}


class ExperimentConfig(BaseModel):
    """Everything a benchmark run needs; ``budget`` defaults to 100 (emulate) or 15d (optimize)."""

    model_config = ConfigDict(frozen=True)

    kind: ExperimentKind
    function: str
    conditions: tuple[Condition, ...]
    budget: int = Field(ge=1)
    n_test: int = Field(default=1000, ge=1)
    master_seed: int = Field(default=0, ge=0)
    n_seeds: int = Field(default=10, ge=1)
    design_iters: int | None = Field(default=None, ge=1)
    baseline: bool = True
    timestamps: bool = True
    jobs: int = Field(default=1, ge=1)
    out: Path = Path("results")

    @model_validator(mode="before")
    @classmethod
    def _fill_defaults(cls, data: object) -> object:
        if not isinstance(data, dict):
            return data
        data = dict(data)
        kind = ExperimentKind(data.get("kind"))
        if not data.get("conditions"):
            data["conditions"] = DEFAULT_CONDITIONS[kind]
        if data.get("budget") is None and data.get("function"):
            d = get_function(str(data["function"])).d_total
            data["budget"] = 100 if kind is ExperimentKind.EMULATE else 15 * d
        return data

    @field_validator("function")
    @classmethod
    def _known_function(cls, value: str) -> str:
        return get_function(value).name

    @field_validator("conditions", mode="before")
    @classmethod
    def _parse_conditions(cls, value: object) -> tuple[Condition, ...]:
        if isinstance(value, str):
            value = [part for part in value.split(",") if part.strip()]
        items = list(value or [])  # type: ignore[call-overload]
        return tuple(Condition.parse(v) if isinstance(v, str) else v for v in items)

    @model_validator(mode="after")
    def _check_budget(self) -> ExperimentConfig:
        labels = [c.label for c in self.conditions]
        if len(set(labels)) != len(labels):
            raise ValueError(f"conditions must be distinct, got {labels}")
        for condition in self.conditions:
            runs = condition.initial_runs(self.d)
            if self.budget < runs:
                raise ValueError(
                    f"budget {self.budget} is below the {runs}-run initial design of "
                    f"{condition.label}"
                )
        return self

    @property
    def d(self) -> int:
        return get_function(self.function).d_total

    def echo(self) -> dict[str, str]:
        """Result-relevant settings for provenance headers (no paths, no job count)."""

        return {
            "kind": self.kind.value,
            "function": self.function,
            "conditions": ",".join(c.label for c in self.conditions),
            "budget": str(self.budget),
            "n_test": str(self.n_test),
            "master_seed": str(self.master_seed),
            "n_seeds": str(self.n_seeds),
            "design_iters": "default" if self.design_iters is None else str(self.design_iters),
            "baseline": str(self.baseline).lower(),
        }


_KEY = re.compile(r"^[A-Za-z][A-Za-z0-9_-]*$")


def load_config_file(path: str | Path) -> dict[str, str]:
    """Parse UTF-8 ``key=value`` lines; ``#`` starts a comment. Keys are normalized to
    snake_case; a repeated key is appended with a comma (for list options)."""

    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"config file not found: {path}")
    values: dict[str, str] = {}
    for lineno, raw in enumerate(path.read_text(encoding="utf-8").splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected key=value, got {raw.strip()!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if not _KEY.match(key):
            raise ConfigError(f"{path}:{lineno}: invalid key {key!r}")
        key = key.replace("-", "_").lower()
        values[key] = f"{values[key]},{value}" if key in values else value
    return values
