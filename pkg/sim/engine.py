# sim/engine.py
from __future__ import annotations

import hashlib
import logging
from dataclasses import dataclass, field

import numpy as np
import pandas as pd

from mim_design.factory import make_design
from mim_design.lhd import maxpro_design
from mim_design.matrix import DesignMatrix
from mim_design.sobol import sobol_points
from mim_gp.errors import ActiveLearningError, MissingKnownMin
from mim_gp.kernels import KernelFamily
from mim_gp.kriging import FitOptions, GPModel, batch_predict, fit
from mim_gp.numeric import BoxOptimizerConfig
from mim_learn.acquisition import AcquisitionSpec
from mim_learn.events import IterationEvent, RunEventBus
from mim_learn.loop import run_active_learning
from mim_learn.runlog import RunLog
from mim_testfns.catalog import TestFunction, get_function

from .config import Condition, ExperimentConfig, ExperimentKind
from .metrics import mse, optimality_gap

logger = logging.getLogger(__name__)


def hash64(master_seed: int, index: int) -> int:
    """Replication seed: first 8 bytes of sha256("<master>:<index>")."""

    digest = hashlib.sha256(f"{master_seed}:{index}".encode()).digest()
    return int.from_bytes(digest[:8], "big")


def replicate_seeds(master_seed: int, n_seeds: int) -> list[int]:
    return [hash64(master_seed, i) for i in range(n_seeds)]


@dataclass
class TestSet:
    """Sobol' test points on the unit cube with the true outputs."""

    __test__ = False

    X: np.ndarray
    y: np.ndarray

    @classmethod
    def for_function(cls, fn: TestFunction, n_test: int) -> TestSet:
        X = sobol_points(n_test, fn.d_total).points
        return cls(X=X, y=np.asarray(fn(X), dtype=float))

    def mse_of(self, model: GPModel) -> float:
        return mse(batch_predict(model, self.X)[0], self.y)


@dataclass
class ReplicateResult:
    """Metric curve of one (condition, seed) run; ``error`` is set when the run failed."""

    condition: str
    kind: str
    seed_index: int
    seed: int
    curve: list[tuple[int, float]] = field(default_factory=list)
    runlog: RunLog | None = None
    error: str | None = None

    @property
    def failed(self) -> bool:
        return self.error is not None

    def frame(self, metric: str) -> pd.DataFrame:
        return pd.DataFrame(
            {
                "condition": self.condition,
                "kind": self.kind,
                "seed_index": self.seed_index,
                "n": [n for n, _ in self.curve],
                "metric": metric,
                "value": [v for _, v in self.curve],
            }
        )


def initial_design(condition: Condition, d: int, seed: int, iters: int | None) -> DesignMatrix:
    return make_design(condition.generator, d, condition.design_size(d), seed, iters)


def _options(seed: int) -> tuple[FitOptions, AcquisitionSpec]:
    fit_opts = FitOptions(seed=hash64(seed, 1))
    optimizer = BoxOptimizerConfig(seed=hash64(seed, 2))
    return fit_opts, AcquisitionSpec(optimizer=optimizer)


def run_replicate(
    config: ExperimentConfig,
    condition: Condition,
    seed_index: int,
    seed: int,
    test: TestSet | None = None,
) -> ReplicateResult:
    """One active-learning run to ``config.budget``.

    Emulation logs the test-set MSE after every refit (from n = n_init on); optimization
    logs the optimality gap of the incumbent.
    """

    fn = get_function(config.function)
    result = ReplicateResult(
        condition=condition.label, kind="sequential", seed_index=seed_index, seed=seed
    )
    fit_opts, acq = _options(seed)
    acq = acq.model_copy(update={"kind": config.kind.acquisition})
    if config.kind is ExperimentKind.OPTIMIZE and fn.known_min is None:
        raise MissingKnownMin(f"{fn.name} has no known global minimum")

    bus = RunEventBus()
    if config.kind is ExperimentKind.EMULATE:
        test = test or TestSet.for_function(fn, config.n_test)

        def record_mse(event: IterationEvent) -> None:
            if event.model is not None:
                result.curve.append((event.record.iteration + 1, test.mse_of(event.model)))

        bus.subscribe(record_mse)

    header = {
        "function": fn.name,
        "condition": condition.label,
        "design": condition.generator.value,
        "seed_index": str(seed_index),
        "seed": str(seed),
    }
    try:
        D0 = initial_design(condition, fn.d_total, seed, config.design_iters)
        _, log = run_active_learning(
            fn, D0, config.budget, condition.family, acq, fit_opts, bus=bus, header=header
        )
    except ActiveLearningError as exc:
        logger.error("%s seed %d failed: %s", condition.label, seed_index, exc)
        result.error = str(exc)
        result.curve.clear()
        return result
    result.runlog = log
    if config.kind is ExperimentKind.OPTIMIZE:
        assert fn.known_min is not None
        gaps = optimality_gap(log.best_curve(), fn.known_min.value)
        n_init = log.n_initial
        result.curve = [(n + 1, float(gaps[n])) for n in range(n_init - 1, len(gaps))]
    return result


def run_baseline(
    config: ExperimentConfig,
    family: KernelFamily,
    seed_index: int,
    seed: int,
    test: TestSet | None = None,
) -> ReplicateResult:
    """Single-batch reference: a MaxPro design with all ``budget`` runs, fitted once."""

    fn = get_function(config.function)
    label = f"maxpro:{config.budget}+{family.value}"
    result = ReplicateResult(condition=label, kind="baseline", seed_index=seed_index, seed=seed)
    test = test or TestSet.for_function(fn, config.n_test)
    try:
        D = maxpro_design(config.budget, fn.d_total, seed, config.design_iters or 2000)
        model = fit(D, fn(D.points), family, FitOptions(seed=hash64(seed, 1)))
    except ActiveLearningError as exc:
        logger.error("%s seed %d failed: %s", label, seed_index, exc)
        result.error = str(exc)
        return result
    result.curve = [(config.budget, test.mse_of(model))]
    return result
