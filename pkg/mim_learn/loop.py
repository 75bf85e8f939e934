"""The sequential active-learning loop: evaluate, fit, acquire, repeat."""

from __future__ import annotations

import logging
import time
from collections.abc import Callable, Mapping
from typing import Any

import numpy as np

from mim_gp.errors import ActiveLearningError, DesignError, IterationError
from mim_gp.kernels import KernelFamily
from mim_gp.kriging import FitOptions, GPModel, fit

from .acquisition import AcquisitionSpec, next_point
from .events import IterationEvent, RunEventBus
from .runlog import IterationRecord, RunLog

logger = logging.getLogger(__name__)

BlackBox = Callable[[np.ndarray], float]


def _fit_at(
    iteration: int,
    X: np.ndarray,
    y: np.ndarray,
    family: KernelFamily,
    options: FitOptions,
    warm: GPModel | None,
) -> GPModel:
    try:
        return fit(
            X,
            y,
            family,
            options.model_copy(update={"seed": options.seed + iteration}),
            warm_start=warm.spec if warm is not None and not warm.constant else None,
        )
    except (ActiveLearningError, ValueError) as exc:
        raise IterationError(f"fit failed: {exc}", iteration) from exc


def run_active_learning(
    f: BlackBox,
    D0: Any,
    n_total: int,
    family: KernelFamily | str,
    acq: AcquisitionSpec | None = None,
    fit_opts: FitOptions | None = None,
    bus: RunEventBus | None = None,
    header: Mapping[str, str] | None = None,
) -> tuple[GPModel, RunLog]:
    """Evaluate ``f`` on ``D0``, then add one acquired point per iteration until ``n_total``.

    Hyperparameters are refitted after every new point, warm-started at the previous optimum.
    """

    acq = acq or AcquisitionSpec()
    fit_opts = fit_opts or FitOptions()
    family = KernelFamily.parse(family)
    X = np.array(getattr(D0, "points", D0), dtype=float)
    if X.ndim != 2 or X.shape[0] < 2:
        raise DesignError(f"the initial design needs at least two rows, got shape {X.shape}")
    n_init, d = X.shape
    if n_total < n_init:
        raise ValueError(f"budget {n_total} is smaller than the initial design ({n_init})")

    log = RunLog(
        header={
            "d": str(d),
            "kernel": family.value,
            "acquisition": acq.kind.value,
            "budget": str(n_total),
            "n_init": str(n_init),
            "fit_seed": str(fit_opts.seed),
            "acq_seed": str(acq.optimizer.seed),
            **{str(k): str(v) for k, v in (header or {}).items()},
        }
    )

    ys: list[float] = []
    initial: list[IterationRecord] = []
    best = float("inf")
    for i, x in enumerate(X):
        start = time.perf_counter()
        value = float(f(x))
        best = min(best, value)
        ys.append(value)
        record = IterationRecord(
            iteration=i,
            x=tuple(float(v) for v in x),
            y=value,
            best_y=best,
            acq_value=None,
            elapsed_ms=(time.perf_counter() - start) * 1e3,
        )
        log.append(record)
        initial.append(record)

    model = _fit_at(n_init - 1, X, np.asarray(ys), family, fit_opts, None)
    if bus is not None:
        for record in initial[:-1]:
            bus.publish(IterationEvent(record=record, model=None))
        bus.publish(IterationEvent(record=initial[-1], model=model))

    for iteration in range(n_init, n_total):
        start = time.perf_counter()
        step_spec = acq.model_copy(
            update={
                "optimizer": acq.optimizer.model_copy(
                    update={"seed": acq.optimizer.seed + iteration}
                )
            }
        )
        proposal = next_point(model, step_spec)
        value = float(f(proposal.x))
        best = min(best, value)
        X = np.vstack([X, proposal.x])
        ys.append(value)
        model = _fit_at(iteration, X, np.asarray(ys), family, fit_opts, model)
        record = IterationRecord(
            iteration=iteration,
            x=tuple(float(v) for v in proposal.x),
            y=value,
            best_y=best,
            acq_value=float(proposal.acq_value),
            elapsed_ms=(time.perf_counter() - start) * 1e3,
            perturbed=proposal.perturbed,
        )
        log.append(record)
        logger.debug(
            "iter %d y=%.6g best=%.6g acq=%.3g", iteration, value, best, proposal.acq_value
        )
        if bus is not None:
            bus.publish(IterationEvent(record=record, model=model))
    return model, log
