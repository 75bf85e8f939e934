# sim/replicate.py
from __future__ import annotations

import logging
import re
from collections.abc import Iterable
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path

import pandas as pd

from mim_gp.errors import ConfigError, MissingKnownMin
from mim_gp.kernels import KernelFamily
from mim_testfns.catalog import get_function

from . import TOOL_NAME, __version__
from .config import Condition, ExperimentConfig, ExperimentKind
from .engine import ReplicateResult, TestSet, replicate_seeds, run_baseline, run_replicate
from .metrics import CURVE_COLUMNS, summarize

logger = logging.getLogger(__name__)

BASELINE_FAMILIES = (KernelFamily.MIM, KernelFamily.GAUSSIAN)


@dataclass
class ExperimentResult:
    summary: pd.DataFrame
    replicates: list[ReplicateResult]
    summary_path: Path | None = None
    runlog_paths: list[Path] = field(default_factory=list)

    @property
    def failures(self) -> dict[str, int]:
        counts: dict[str, int] = {}
        for rep in self.replicates:
            if rep.failed:
                counts[rep.condition] = counts.get(rep.condition, 0) + 1
        return counts


def provenance(config: ExperimentConfig) -> dict[str, str]:
    """``#`` header lines for every output file; the timestamp is optional."""

    header = {"tool": TOOL_NAME, "version": __version__, **config.echo()}
    if config.timestamps:
        header["timestamp"] = datetime.now(timezone.utc).isoformat(timespec="seconds")
    return header


def write_with_header(frame: pd.DataFrame, path: Path, header: dict[str, str]) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    body = frame.to_csv(index=False, float_format="%.17g", lineterminator="\n")
    lines = "".join(f"# {key}={value}\n" for key, value in header.items())
    path.write_text(lines + body, encoding="utf-8")
    return path


def _slug(label: str) -> str:
    return re.sub(r"[^a-z0-9]+", "_", label.lower()).strip("_")


_Task = tuple[str, ExperimentConfig, Condition | KernelFamily, int, int]


def _run_task(task: _Task) -> ReplicateResult:
    kind, config, what, seed_index, seed = task
    test = None
    if config.kind is ExperimentKind.EMULATE:
        test = TestSet.for_function(get_function(config.function), config.n_test)
    if kind == "baseline":
        assert isinstance(what, KernelFamily)
        return run_baseline(config, what, seed_index, seed, test)
    assert isinstance(what, Condition)
    return run_replicate(config, what, seed_index, seed, test)


def _tasks(config: ExperimentConfig) -> list[_Task]:
    seeds = replicate_seeds(config.master_seed, config.n_seeds)
    tasks: list[_Task] = [
        ("sequential", config, condition, i, seed)
        for condition in config.conditions
        for i, seed in enumerate(seeds)
    ]
    if config.kind is ExperimentKind.EMULATE and config.baseline:
        tasks += [
            ("baseline", config, family, i, seed)
            for family in BASELINE_FAMILIES
            for i, seed in enumerate(seeds)
        ]
    return tasks


def _execute(tasks: list[_Task], jobs: int) -> list[ReplicateResult]:
    if jobs <= 1:
        results = []
        for task in tasks:
            results.append(_run_task(task))
            logger.info("%s seed %d done", results[-1].condition, task[3])
        return results
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(_run_task, tasks))


def _curves(results: Iterable[ReplicateResult], metric: str) -> pd.DataFrame:
    frames = [r.frame(metric) for r in results if not r.failed and r.curve]
    if not frames:
        return pd.DataFrame(columns=CURVE_COLUMNS)
    return pd.concat(frames, ignore_index=True)


def run_experiment(config: ExperimentConfig, write: bool = True) -> ExperimentResult:
    """All conditions x seeds (plus emulation baselines), summarized over seeds.

    Replication i always uses ``hash64(master_seed, i)``, so adding seeds leaves earlier
    replications unchanged. With ``write`` the summary CSV and one RunLog CSV per
    replication go under ``config.out``.
    """

    results = _execute(_tasks(config), config.jobs)
    outcome = ExperimentResult(summary=pd.DataFrame(), replicates=results)
    outcome.summary = summarize(_curves(results, config.kind.metric), outcome.failures)
    if not write:
        return outcome

    header = provenance(config)
    out = Path(config.out)
    summary_name = f"{config.function}_{config.kind.value}_summary.csv"
    outcome.summary_path = write_with_header(outcome.summary, out / summary_name, header)
    for rep in results:
        if rep.runlog is None:
            continue
        path = out / "runs" / _slug(rep.condition) / f"seed{rep.seed_index:03d}.csv"
        outcome.runlog_paths.append(
            rep.runlog.write_csv(path, include_timing=config.timestamps, provenance=header)
        )
    return outcome


def run_emulation(config: ExperimentConfig, write: bool = True) -> ExperimentResult:
    """ALM runs scored by test-set MSE after every refit, plus MaxPro batch baselines."""

    if config.kind is not ExperimentKind.EMULATE:
        raise ConfigError("run_emulation needs an emulate config")
    return run_experiment(config, write)


def run_optimization(config: ExperimentConfig, write: bool = True) -> ExperimentResult:
    """EI runs scored by the optimality gap of the incumbent best."""

    if get_function(config.function).known_min is None:
        raise MissingKnownMin(f"{config.function} has no known global minimum")
    if config.kind is not ExperimentKind.OPTIMIZE:
        raise ConfigError("run_optimization needs an optimize config")
    return run_experiment(config, write)
