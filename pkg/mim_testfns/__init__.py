"""Benchmark black-box functions on the unit hypercube."""

from .catalog import (
    EMULATION_SET,
    OPTIMIZATION_SET,
    KnownMinimum,
    TestFunction,
    catalog,
    eval_unit,
    get_function,
)

__all__ = [
    "EMULATION_SET",
    "OPTIMIZATION_SET",
    "KnownMinimum",
    "TestFunction",
    "catalog",
    "eval_unit",
    "get_function",
]
