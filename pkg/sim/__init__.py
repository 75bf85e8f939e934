"""Benchmark harness: emulation and optimization experiments across seeds."""

TOOL_NAME = "mim-active-learning"
__version__ = "0.1.0"

__all__ = [
    "TOOL_NAME",
    "__version__",
    "config",
    "engine",
    "metrics",
    "plot",
    "replicate",
]
