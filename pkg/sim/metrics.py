# sim/metrics.py
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import pandas as pd

CURVE_COLUMNS = ["condition", "kind", "seed_index", "n", "metric", "value"]
SUMMARY_COLUMNS = ["condition", "kind", "n", "metric", "mean", "stderr", "seeds", "failed"]


def mse(predicted: np.ndarray, truth: np.ndarray) -> float:
    diff = np.asarray(predicted, dtype=float) - np.asarray(truth, dtype=float)
    return float(np.mean(diff**2))


def optimality_gap(best_curve: np.ndarray, f_min: float) -> np.ndarray:
    """Incumbent best minus the known global minimum (nonincreasing along a run)."""

    return np.asarray(best_curve, dtype=float) - f_min


@dataclass(frozen=True)
class SummaryRow:
    condition: str
    kind: str
    n: int
    metric: str
    mean: float
    stderr: float
    seeds: int
    failed: int


def summarize(curves: pd.DataFrame, failures: dict[str, int] | None = None) -> pd.DataFrame:
    """Mean and standard error over seeds for each (condition, kind, metric, n).

    Groups keep their first-appearance order in ``curves``.

    ``failures`` maps condition labels to the number of failed replications; it is
    copied onto every row of that condition.
    """

    failures = failures or {}
    if curves.empty:
        return pd.DataFrame(columns=SUMMARY_COLUMNS)
    keys = ["condition", "kind", "metric", "n"]
    grouped = curves.groupby(keys, sort=False)["value"]
    out = grouped.agg(mean="mean", std="std", seeds="count").reset_index()
    out["stderr"] = (out["std"].fillna(0.0) / np.sqrt(out["seeds"])).astype(float)
    out["failed"] = out["condition"].map(lambda c: int(failures.get(c, 0))).astype(int)
    out["n"] = out["n"].astype(int)
    return out[SUMMARY_COLUMNS].reset_index(drop=True)


def summary_rows(summary: pd.DataFrame) -> list[SummaryRow]:
    return [SummaryRow(**row) for row in summary[SUMMARY_COLUMNS].to_dict(orient="records")]
