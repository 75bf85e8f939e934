"""Per-iteration events published by the active-learning loop."""

from __future__ import annotations

from collections.abc import Callable
from dataclasses import dataclass

from mim_gp.kriging import GPModel

from .runlog import IterationRecord


@dataclass(frozen=True)
class IterationEvent:
    """One logged evaluation together with the model fitted after it."""

    record: IterationRecord
    model: GPModel | None


class RunEventBus:
    """Simple pub/sub bus for loop observers (progress output, test-set metrics)."""

    def __init__(self) -> None:
        self._subscribers: list[Callable[[IterationEvent], None]] = []

    def subscribe(self, callback: Callable[[IterationEvent], None]) -> None:
        self._subscribers.append(callback)

    def publish(self, event: IterationEvent) -> None:
        for callback in list(self._subscribers):
            callback(event)
