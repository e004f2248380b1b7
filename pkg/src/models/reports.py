"""
Scan and dimension reports.
"""

import math
from dataclasses import dataclass, field
from typing import Any, Optional


@dataclass(frozen=True)
class ScanPoint:
    """
    Result at one grid energy.

    ``divergent_flags`` has bit j-1 set when the j-th small-divisor sum is
    infinite or at least the cap. ``growth_stat`` is NaN when growth was not
    measured or the integration failed.
    """

    eta: float
    growth_stat: float
    divergent_flags: int
    bound_value: float
    flagged: bool
    error: Optional[str] = None

    def to_row(self) -> dict[str, Any]:
        return {
            "eta": self.eta,
            "growth_stat": self.growth_stat,
            "divergent_j_flags": self.divergent_flags,
            "bound_value": self.bound_value,
            "flagged": int(self.flagged),
        }


@dataclass
class ScanReport:
    eta_min: float
    eta_max: float
    n_grid: int
    x_max: float
    growth_threshold: float
    cap: float
    points: list[ScanPoint] = field(default_factory=list)
    flagged_intervals: list[tuple[float, float]] = field(default_factory=list)

    @property
    def grid(self) -> list[float]:
        return [point.eta for point in self.points]

    @property
    def grid_step(self) -> float:
        return (self.eta_max - self.eta_min) / (self.n_grid - 1)

    @property
    def failed(self) -> list[ScanPoint]:
        return [point for point in self.points if point.error is not None]

    def header_lines(self) -> list[str]:
        return [
            f"eta range [{self.eta_min!r}, {self.eta_max!r}], {self.n_grid} points, "
            f"grid step {self.grid_step!r}",
            f"x_max={self.x_max!r}, growth_threshold={self.growth_threshold!r}, cap={self.cap!r}",
            "flags are limited by grid resolution; isolated resonances narrower than "
            "one grid step can be missed",
        ]


@dataclass(frozen=True)
class DimensionEstimate:
    """
    Box-counting estimate from a log-log fit of N(eps) against 1/eps.

    An empty set gives slope 0 with ``degenerate`` set.
    """

    scales: tuple[float, ...]
    counts: tuple[int, ...]
    slope: float
    confidence: float
    degenerate: bool = False

    @property
    def counts_monotone(self) -> bool:
        ordered = [count for _, count in sorted(zip(self.scales, self.counts))]
        return all(a >= b for a, b in zip(ordered, ordered[1:]))

    def summary(self) -> str:
        width = "nan" if math.isnan(self.confidence) else repr(self.confidence)
        return f"slope={self.slope!r} confidence={width} degenerate={int(self.degenerate)}"


@dataclass(frozen=True)
class CheckResult:
    """One lhs <= rhs + slack contract evaluated by a command."""

    check: str
    case: str
    lhs: float
    rhs: float
    slack: float = 0.0
    contract: bool = True

    @property
    def holds(self) -> bool:
        return self.lhs <= self.rhs + self.slack

    def to_row(self) -> dict[str, Any]:
        return {
            "check": self.check,
            "case": self.case,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "holds": int(self.holds),
        }
