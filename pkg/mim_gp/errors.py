"""Exception hierarchy shared by every package in the toolkit."""

from __future__ import annotations


class ActiveLearningError(Exception):
    """Root of all toolkit errors."""


class NumericalError(ActiveLearningError):
    """A numerical routine could not produce a usable result."""


class NotPositiveDefinite(NumericalError):
    """Cholesky factorization failed even at the maximum jitter."""

    def __init__(self, message: str, jitter: float | None = None) -> None:
        super().__init__(message)
        self.jitter = jitter


class ZeroVariance(NumericalError):
    """The predictor output has (numerically) no variance."""


class DimensionMismatch(ActiveLearningError, ValueError):
    """Points, designs or length scales disagree on the input dimension."""


class DegenerateData(ActiveLearningError):
    """The observed outputs are constant."""


class PointInDesign(ActiveLearningError, ValueError):
    """A query point is too close to a design point for a limit check."""


class CoordinateCollision(ActiveLearningError, ValueError):
    """A query point shares (almost) a coordinate value with a design point."""


class DesignError(ActiveLearningError, ValueError):
    """A design violates its structural invariants."""


class DesignFormatError(DesignError):
    """A design file is malformed or holds out-of-range values."""


class MissingKnownMin(ActiveLearningError, ValueError):
    """An optimization benchmark needs a function with a known global minimum."""


class ConfigError(ActiveLearningError, ValueError):
    """Invalid experiment or command-line configuration."""


class ReportFormatError(ActiveLearningError, ValueError):
    """A summary or report file is missing, empty or malformed."""


class IterationError(ActiveLearningError):
    """Failure inside the sequential loop, tagged with the iteration index."""

    def __init__(self, message: str, iteration: int) -> None:
        super().__init__(f"iteration {iteration}: {message}")
        self.iteration = iteration
