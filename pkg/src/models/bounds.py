"""
Results of the small-divisor and error sums and of the boundedness estimate.
"""

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional


@dataclass
class SumValue:
    """
    A finite sum over tuples of potential terms.

    ``pole_hits`` holds 0-based term-index tuples whose divisor vanished; any
    hit makes the sum infinite.
    """

    value: float = 0.0
    terms_used: int = 0
    last_term_magnitude: float = 0.0
    pole_hits: list[tuple[int, ...]] = field(default_factory=list)
    exact_value: Optional[Fraction] = None

    @property
    def finite(self) -> bool:
        return not self.pole_hits and math.isfinite(self.value)

    def add(self, magnitude: float, multiplicity: int = 1) -> None:
        self.value += multiplicity * magnitude
        self.terms_used += multiplicity
        self.last_term_magnitude = magnitude

    def mark_pole(self, indices: tuple[int, ...]) -> None:
        self.pole_hits.append(indices)
        self.value = math.inf


@dataclass(frozen=True)
class BoundBreakdown:
    """Three-part estimate of |log R(b) - log R(a)|, uniform in b."""

    eta: float
    a: float
    term1: float
    term2: float
    term3: float

    @property
    def total(self) -> float:
        return self.term1 + self.term2 + self.term3

    def to_dict(self) -> dict[str, float]:
        return {
            "eta": self.eta,
            "a": self.a,
            "term1": self.term1,
            "term2": self.term2,
            "term3": self.term3,
            "total": self.total,
        }


@dataclass(frozen=True)
class CompositionCheck:
    """One numerical instance of a composition inequality lhs <= rhs."""

    law: str
    J: int
    K: int
    k: int
    lhs: float
    rhs: float

    @property
    def holds(self) -> bool:
        return self.lhs <= self.rhs * (1 + 1e-9) + 1e-300
