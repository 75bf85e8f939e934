from __future__ import annotations

import hashlib

import numpy as np
import pandas as pd
import pytest
from pydantic import ValidationError

from mim_gp.errors import ConfigError, MissingKnownMin, ReportFormatError
from sim.config import Condition, ExperimentConfig, ExperimentKind, load_config_file
from sim.engine import hash64, replicate_seeds
from sim.metrics import SUMMARY_COLUMNS, optimality_gap, summarize
from sim.plot import plot_summary, read_summary
from sim.replicate import run_emulation, run_experiment, run_optimization, write_with_header


def _small(kind: ExperimentKind, tmp_path, **overrides) -> ExperimentConfig:
    data = {
        "kind": kind,
        "function": "levy2",
        "conditions": ["maxpro:6+mim", "maxpro:6+gaussian"],
        "budget": 8,
        "n_test": 64,
        "n_seeds": 2,
        "design_iters": 50,
        "timestamps": False,
        "out": tmp_path,
    }
    data.update(overrides)
    return ExperimentConfig(**data)


def test_replicate_seeds_are_stable_prefixes() -> None:
    digest = hashlib.sha256(b"7:3").digest()
    assert hash64(7, 3) == int.from_bytes(digest[:8], "big")
    assert replicate_seeds(7, 5)[:3] == replicate_seeds(7, 3)
    assert len(set(replicate_seeds(7, 50))) == 50


def test_condition_parsing() -> None:
    c = Condition.parse("maxpro:10d+gaussian")
    assert c.label == "maxpro:10d+gaussian"
    assert c.design_size(6) == 60
    assert c.initial_runs(6) == 60
    m = Condition.parse("MOFAT+mim")
    assert m.label == "mofat+mim"
    assert m.design_size(10) == 4
    assert m.initial_runs(10) == 44
    for bad in ("maxpro", "mofat+matern", "imported+mim", "maxpro:0+mim"):
        with pytest.raises(ConfigError):
            Condition.parse(bad)


def test_config_defaults_and_validation(tmp_path) -> None:
    opt = ExperimentConfig(kind="optimize", function="levy6")
    assert opt.budget == 90
    assert len(opt.conditions) == 5
    emu = ExperimentConfig(kind="emulate", function="friedman_aug10")
    assert emu.budget == 100
    assert emu.echo()["conditions"] == "mofat+mim,mofat+gaussian,maxpro+mim,maxpro+gaussian"
    with pytest.raises(ValidationError):
        _small(ExperimentKind.EMULATE, tmp_path, budget=5)
    with pytest.raises(ValidationError):
        _small(ExperimentKind.EMULATE, tmp_path, conditions=["maxpro:6+mim", "maxpro:6+mim"])


def test_config_file_parsing(tmp_path) -> None:
    path = tmp_path / "run.cfg"
    path.write_text(
        "# benchmark\nfunction = levy2\nN-Seeds=3\ncondition=mofat+mim\n"
        "condition=maxpro+gaussian  # second\n"
    )
    values = load_config_file(path)
    assert values == {
        "function": "levy2",
        "n_seeds": "3",
        "condition": "mofat+mim,maxpro+gaussian",
    }
    with pytest.raises(ConfigError, match="not found"):
        load_config_file(tmp_path / "missing.cfg")
    path.write_text("function levy2\n")
    with pytest.raises(ConfigError):
        load_config_file(path)


def test_summary_mean_and_standard_error() -> None:
    curves = pd.DataFrame(
        {
            "condition": ["a", "a", "a", "a", "b"],
            "kind": ["sequential"] * 5,
            "seed_index": [0, 0, 1, 1, 0],
            "n": [5, 6, 5, 6, 6],
            "metric": ["mse"] * 5,
            "value": [1.0, 0.5, 3.0, 0.5, 2.0],
        }
    )
    summary = summarize(curves, {"b": 1})
    assert list(summary.columns) == SUMMARY_COLUMNS
    assert summary[["condition", "n"]].values.tolist() == [["a", 5], ["a", 6], ["b", 6]]
    first = summary.iloc[0]
    assert first["mean"] == 2.0
    assert first["stderr"] == pytest.approx(np.std([1.0, 3.0], ddof=1) / np.sqrt(2))
    assert summary.iloc[1]["stderr"] == 0.0
    assert summary.iloc[2]["stderr"] == 0.0
    assert summary["failed"].tolist() == [0, 0, 1]


def test_optimality_gap() -> None:
    np.testing.assert_allclose(optimality_gap(np.array([3.0, 2.0, 2.0]), 1.5), [1.5, 0.5, 0.5])


def test_emulation_experiment_writes_summary_and_run_logs(tmp_path) -> None:
    result = run_emulation(_small(ExperimentKind.EMULATE, tmp_path))
    summary = result.summary
    sequential = summary[summary["kind"] == "sequential"]
    assert len(sequential) == 2 * 3
    assert sorted(set(sequential["n"])) == [6, 7, 8]
    assert (sequential["seeds"] == 2).all()
    baseline = summary[summary["kind"] == "baseline"]
    assert sorted(baseline["condition"]) == ["maxpro:8+gaussian", "maxpro:8+mim"]
    assert (baseline["n"] == 8).all()
    assert (summary["mean"] >= 0).all()

    assert result.summary_path == tmp_path / "levy2_emulate_summary.csv"
    assert len(result.runlog_paths) == 4
    assert (tmp_path / "runs" / "maxpro_6_mim" / "seed000.csv").is_file()
    text = result.summary_path.read_text()
    assert "# function=levy2" in text
    assert "timestamp" not in text


def test_experiments_are_reproducible_without_timestamps(tmp_path) -> None:
    a = run_experiment(_small(ExperimentKind.OPTIMIZE, tmp_path / "a", n_seeds=1))
    b = run_experiment(_small(ExperimentKind.OPTIMIZE, tmp_path / "b", n_seeds=1))
    assert a.summary_path.read_bytes() == b.summary_path.read_bytes()
    for pa, pb in zip(a.runlog_paths, b.runlog_paths, strict=True):
        assert pa.read_bytes() == pb.read_bytes()
    assert (a.summary["metric"] == "gap").all()
    assert (a.summary["mean"] >= 0).all()
    for _, group in a.summary.groupby("condition"):
        assert group.sort_values("n")["mean"].is_monotonic_decreasing


def test_experiment_kind_guards(tmp_path) -> None:
    with pytest.raises(ConfigError):
        run_emulation(_small(ExperimentKind.OPTIMIZE, tmp_path))
    with pytest.raises(MissingKnownMin):
        run_optimization(ExperimentConfig(kind="optimize", function="friedman", out=tmp_path))


def _summary_frame() -> pd.DataFrame:
    rows = []
    for cond, scale in (("mofat+mim", 1.0), ("maxpro+gaussian", 2.0)):
        for n in (6, 7, 8):
            rows.append([cond, "sequential", n, "mse", scale / n, 0.01, 2, 0])
    rows.append(["maxpro:8+mim", "baseline", 8, "mse", 0.2, 0.0, 2, 0])
    return pd.DataFrame(rows, columns=SUMMARY_COLUMNS)


def test_plot_draws_one_curve_per_condition(tmp_path) -> None:
    summary = write_with_header(_summary_frame(), tmp_path / "s.csv", {"tool": "t"})
    paths = plot_summary(summary, tmp_path / "plots")
    assert [p.name for p in paths] == ["s_mse.svg"]
    svg = paths[0].read_text()
    assert svg.count("<polyline") == 2
    assert "stroke-dasharray" in svg
    assert "maxpro:8+mim (batch)" in svg


def test_plot_rejects_an_empty_summary(tmp_path) -> None:
    empty = write_with_header(
        pd.DataFrame(columns=SUMMARY_COLUMNS), tmp_path / "empty.csv", {"tool": "t"}
    )
    with pytest.raises(ReportFormatError):
        plot_summary(empty, tmp_path / "plots")
    assert not (tmp_path / "plots").exists()
    with pytest.raises(ReportFormatError):
        read_summary(tmp_path / "nothing.csv")
