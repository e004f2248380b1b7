"""
Validated potential and its envelope statistics.
"""

import math
from dataclasses import dataclass
from typing import Callable

from src.schemas.potential import TermSpec


@dataclass(frozen=True)
class RealnessCertificate:
    """
    Records whether the term multiset is closed under
    (c, phi, gamma) -> (conj(c), -phi, conj(gamma)).

    ``pairs`` maps each term index to the index of its conjugate partner.
    """

    closed: bool
    symmetrized: bool
    pairs: tuple[tuple[int, int], ...] = ()


@dataclass(frozen=True)
class Potential:
    terms: tuple[TermSpec, ...]
    p: int
    alpha: float
    certificate: RealnessCertificate
    coefficient_alpha_sum: float
    tau: float

    @property
    def is_real(self) -> bool:
        return self.certificate.closed

    @property
    def is_empty(self) -> bool:
        return not self.terms

    @property
    def coefficient_l1(self) -> float:
        return sum(abs(t.c) for t in self.terms)

    def value_function(self) -> Callable[[float], float]:
        """
        Fast scalar evaluator of V(x) for real potentials.

        Re(c e^{-i phi x}) = c_re cos(phi x) + c_im sin(phi x); the imaginary
        parts cancel pairwise by the realness certificate.
        """
        packed = [
            (t.c_re, t.c_im, t.phi, t.envelope.value)
            for t in self.terms
            if t.envelope.kind != "zero"
        ]

        def potential(x: float) -> float:
            total = 0.0
            for c_re, c_im, phi, gamma in packed:
                g = gamma(x)
                if g:
                    total += (c_re * math.cos(phi * x) + c_im * math.sin(phi * x)) * g
            return total

        return potential


@dataclass(frozen=True)
class EnvelopeStats:
    sigma_at_x: float
    tau: float
    lp_tail: float
    lp_method: str = "closed-form"
