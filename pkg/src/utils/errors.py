"""
Exception hierarchy for the workbench.

Every error raised on purpose by the services derives from WorkbenchError so
the command layer can map it to an exit code.
"""

from typing import Any, Optional, Sequence


class WorkbenchError(Exception):
    """Base class for all workbench errors."""


class PotentialValidationError(WorkbenchError, ValueError):
    """A potential, envelope or coefficient sequence violates its invariants."""


class PoleError(WorkbenchError, ZeroDivisionError):
    """
    A small divisor vanished during evaluation.

    Attributes:
        denominator: The value of the vanishing denominator.
        indices: Term indices (or argument positions) that produced it.
    """

    def __init__(
        self,
        denominator: Any,
        indices: Optional[Sequence[int]] = None,
        message: Optional[str] = None,
    ):
        self.denominator = denominator
        self.indices = tuple(indices) if indices is not None else ()
        super().__init__(message or f"pole: denominator {denominator} vanishes")


class InfiniteBoundError(WorkbenchError):
    """A constituent sum of the boundedness estimate is infinite."""

    def __init__(self, message: str, pole_hits: Sequence[tuple[int, ...]] = ()):
        self.pole_hits = list(pole_hits)
        super().__init__(message)


class StepFailure(WorkbenchError):
    """The adaptive integrator could not continue."""

    def __init__(self, x: float, message: str):
        self.x = x
        super().__init__(f"integration failed at x={x}: {message}")


class DegenerateStateError(WorkbenchError):
    """A solution sample has (u, u') = (0, 0)."""

    def __init__(self, index: int, x: float):
        self.index = index
        self.x = x
        super().__init__(f"degenerate state (u, u') = (0, 0) at sample {index}, x={x}")


class RadicandError(WorkbenchError):
    """The amplitude radicand of a discrete Prüfer step is not positive."""

    def __init__(self, n: int, radicand: float):
        self.n = n
        self.radicand = radicand
        super().__init__(f"non-positive radicand {radicand} at n={n}")


class DegenerateFitError(WorkbenchError):
    """Box-counting scales do not support a log-log fit."""


class ConfigError(WorkbenchError):
    """
    Configuration file could not be parsed or validated.

    Attributes:
        key: Dotted path of the offending key, if known.
    """

    def __init__(self, message: str, key: Optional[str] = None):
        self.key = key
        super().__init__(message)
