"""
Value types of the small-divisor function algebra.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence, Union

# Exact arbitrary-precision rational scalar; Fraction keeps lowest terms with
# a positive denominator.
Rational = Fraction
Number = Union[Fraction, float]


@dataclass(frozen=True)
class SymFunction:
    """
    A function of (eta; phi_1, ..., phi_arity).

    ``symmetric`` marks evaluators invariant under permutations of the phi
    arguments, which lets symmetric products average over subsets instead of
    full permutations.
    """

    arity: int
    evaluator: Callable[[Number, tuple[Number, ...]], Number]
    label: str
    symmetric: bool = True

    def __call__(self, eta: Number, phis: Sequence[Number] = ()) -> Number:
        if len(phis) != self.arity:
            raise ValueError(f"{self.label} takes {self.arity} phi arguments, got {len(phis)}")
        return self.evaluator(eta, tuple(phis))


@dataclass
class IdentityReport:
    identity: str
    J: int
    K: int
    k: int
    trials: int
    max_discrepancy: Fraction = Fraction(0)
    witnesses: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.max_discrepancy == 0 and not self.witnesses

    def record(self, discrepancy: Fraction, witness: str) -> None:
        magnitude = abs(discrepancy)
        if magnitude > self.max_discrepancy:
            self.max_discrepancy = magnitude
        if magnitude != 0 and len(self.witnesses) < 3:
            self.witnesses.append(witness)
