"""Ordered record of an active-learning run and its CSV form."""

from __future__ import annotations

import io
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import pandas as pd


@dataclass(frozen=True)
class IterationRecord:
    """One evaluation: initial-design rows carry ``acq_value=None``."""

    iteration: int
    x: tuple[float, ...]
    y: float
    best_y: float
    acq_value: float | None
    elapsed_ms: float
    perturbed: bool = False


@dataclass
class RunLog:
    """Header (function, d, kernel, design, seeds, budget) plus per-iteration records."""

    header: dict[str, str] = field(default_factory=dict)
    records: list[IterationRecord] = field(default_factory=list)

    def append(self, record: IterationRecord) -> None:
        if self.records and record.best_y > self.records[-1].best_y:
            raise ValueError("incumbent best must be nonincreasing")
        self.records.append(record)

    def __len__(self) -> int:
        return len(self.records)

    @property
    def best_y(self) -> float:
        return self.records[-1].best_y if self.records else float("inf")

    @property
    def n_initial(self) -> int:
        return sum(1 for r in self.records if r.acq_value is None)

    @property
    def fallback_iterations(self) -> list[int]:
        return [r.iteration for r in self.records if r.perturbed]

    def points(self) -> np.ndarray:
        return np.array([r.x for r in self.records], dtype=float)

    def outputs(self) -> np.ndarray:
        return np.array([r.y for r in self.records], dtype=float)

    def best_curve(self) -> np.ndarray:
        return np.array([r.best_y for r in self.records], dtype=float)

    def to_frame(self, include_timing: bool = True) -> pd.DataFrame:
        d = len(self.records[0].x) if self.records else int(self.header.get("d", 0))
        rows = []
        for r in self.records:
            row: dict[str, object] = {"iter": r.iteration}
            row.update({f"x{k + 1}": v for k, v in enumerate(r.x)})
            row["y"] = r.y
            row["best_y"] = r.best_y
            row["acq_value"] = r.acq_value
            row["elapsed_ms"] = r.elapsed_ms if include_timing else None
            rows.append(row)
        xcols = [f"x{k + 1}" for k in range(d)]
        columns = ["iter", *xcols, "y", "best_y", "acq_value", "elapsed_ms"]
        return pd.DataFrame(rows, columns=columns)

    def to_csv(
        self,
        include_timing: bool = True,
        provenance: Mapping[str, str] | None = None,
    ) -> str:
        lines = [f"# {key}={value}" for key, value in (provenance or {}).items()]
        lines += [f"# {key}={value}" for key, value in self.header.items()]
        fallbacks = self.fallback_iterations
        if fallbacks:
            lines.append("# duplicate_fallback_iterations=" + ",".join(map(str, fallbacks)))
        frame = self.to_frame(include_timing)
        body = frame.to_csv(index=False, float_format="%.17g", lineterminator="\n", na_rep="")
        return "".join(line + "\n" for line in lines) + body

    def write_csv(
        self,
        path: str | Path,
        include_timing: bool = True,
        provenance: Mapping[str, str] | None = None,
    ) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(self.to_csv(include_timing, provenance), encoding="utf-8")
        return path


def _comment_pairs(lines: Iterable[str]) -> dict[str, str]:
    out: dict[str, str] = {}
    for line in lines:
        body = line[1:].strip()
        if "=" in body:
            key, value = body.split("=", 1)
            out[key.strip()] = value.strip()
    return out


def read_runlog(path: str | Path) -> RunLog:
    """Parse a RunLog CSV written by :meth:`RunLog.write_csv`."""

    text = Path(path).read_text(encoding="utf-8")
    comments = [line for line in text.splitlines() if line.startswith("#")]
    header = _comment_pairs(comments)
    fallbacks = {int(v) for v in header.pop("duplicate_fallback_iterations", "").split(",") if v}
    frame = pd.read_csv(io.StringIO(text), comment="#", float_precision="round_trip")
    xcols = [c for c in frame.columns if c.startswith("x")]
    log = RunLog(header=header)
    for row in frame.itertuples(index=False):
        data = row._asdict()
        acq = data["acq_value"]
        elapsed = data["elapsed_ms"]
        log.records.append(
            IterationRecord(
                iteration=int(data["iter"]),
                x=tuple(float(data[c]) for c in xcols),
                y=float(data["y"]),
                best_y=float(data["best_y"]),
                acq_value=None if pd.isna(acq) else float(acq),
                elapsed_ms=0.0 if pd.isna(elapsed) else float(elapsed),
                perturbed=int(data["iter"]) in fallbacks,
            )
        )
    return log
