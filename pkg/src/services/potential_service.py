"""
Potential construction, evaluation and envelope statistics.

A potential is a finite sum V(x) = sum_k c_k exp(-i phi_k x) gamma_k(x). Real
potentials are certified by pairing every term with its conjugate partner
(conj(c), -phi, gamma); build_potential can enforce this by averaging the
term list with its complex conjugate.
"""

import math
from typing import Iterable, Optional, Sequence

import numpy as np
from scipy import integrate

from src.config.logging_conf import get_logger
from src.models.potential import EnvelopeStats, Potential, RealnessCertificate
from src.schemas.potential import Envelope, PotentialSpec, TermSpec
from src.utils.errors import PotentialValidationError

logger = get_logger(__name__)

PAIR_TOLERANCE = 1e-12
LP_TAIL_EPSREL = 1e-10
WINDOW_EPSREL = 1e-8


def _close(a: float, b: float) -> bool:
    return abs(a - b) <= PAIR_TOLERANCE * max(1.0, abs(a), abs(b))


def _is_partner(term: TermSpec, other: TermSpec) -> bool:
    return (
        _close(other.phi, -term.phi)
        and other.envelope == term.envelope
        and _close(other.c_re, term.c_re)
        and _close(other.c_im, -term.c_im)
    )


def find_conjugate_pairs(
    terms: Sequence[TermSpec],
) -> Optional[tuple[tuple[int, int], ...]]:
    """
    Pair every term with a conjugate partner.

    Returns:
        The (index, partner) pairs, or None when the multiset is not closed.
    """
    unmatched = list(range(len(terms)))
    pairs: list[tuple[int, int]] = []
    while unmatched:
        i = unmatched.pop(0)
        if _is_partner(terms[i], terms[i]):
            pairs.append((i, i))
            continue
        partner = next((j for j in unmatched if _is_partner(terms[i], terms[j])), None)
        if partner is None:
            return None
        unmatched.remove(partner)
        pairs.append((i, partner))
        pairs.append((partner, i))
    return tuple(sorted(pairs))


def _merge_terms(terms: Iterable[TermSpec]) -> list[TermSpec]:
    merged: dict[tuple[float, Envelope], complex] = {}
    for term in terms:
        key = (term.phi, term.envelope)
        merged[key] = merged.get(key, 0j) + term.c
    return [
        TermSpec(c_re=c.real, c_im=c.imag, phi=phi, envelope=envelope)
        for (phi, envelope), c in merged.items()
        if c != 0
    ]


def symmetrize_terms(terms: Sequence[TermSpec]) -> list[TermSpec]:
    """Average the term list with its complex conjugate."""
    halved = [t.model_copy(update={"c_re": t.c_re / 2, "c_im": t.c_im / 2}) for t in terms]
    return _merge_terms(halved + [t.conjugate() for t in halved])


def _validate_envelopes(terms: Sequence[TermSpec], p: int) -> None:
    for index, term in enumerate(terms):
        if not math.isfinite(term.envelope.variation()):
            raise PotentialValidationError(f"term {index}: envelope has infinite variation")
        if not math.isfinite(term.envelope.lp_integral(p, 0.0)):
            raise PotentialValidationError(
                f"term {index}: envelope {term.envelope.kind} is not in L^{p}"
            )


def build_potential(
    terms: Sequence[TermSpec], p: int, alpha: float, symmetrize: bool = True
) -> Potential:
    """
    Validate a term list and build a Potential.

    Args:
        terms: Oscillatory terms.
        p: Integrability exponent, p >= 2.
        alpha: Coefficient decay exponent in (0, 1/(p-1)).
        symmetrize: Append conjugate terms (halving all coefficients) when the
            list is not closed under conjugation-negation.

    Returns:
        The validated Potential.

    Raises:
        PotentialValidationError: On bad p, alpha, or envelopes.
    """
    if not isinstance(p, int) or p < 2:
        raise PotentialValidationError(f"p must be an integer >= 2, got {p}")
    if not 0.0 < alpha < 1.0 / (p - 1):
        raise PotentialValidationError(
            f"alpha must lie in (0, 1/(p-1)) = (0, {1.0 / (p - 1)}), got {alpha}"
        )
    _validate_envelopes(terms, p)

    terms = list(terms)
    pairs = find_conjugate_pairs(terms)
    symmetrized = False
    if pairs is None and symmetrize:
        terms = symmetrize_terms(terms)
        pairs = find_conjugate_pairs(terms)
        symmetrized = True
        logger.debug(f"[PotentialService] Symmetrized term list to {len(terms)} terms")

    certificate = RealnessCertificate(
        closed=pairs is not None, symmetrized=symmetrized, pairs=pairs or ()
    )
    potential = Potential(
        terms=tuple(terms),
        p=p,
        alpha=alpha,
        certificate=certificate,
        coefficient_alpha_sum=sum(abs(t.c) ** alpha for t in terms),
        tau=max((t.envelope.variation() for t in terms), default=0.0),
    )
    logger.debug(
        f"[PotentialService] Built potential: {len(terms)} terms, p={p}, "
        f"alpha={alpha}, closed={certificate.closed}, tau={potential.tau}"
    )
    return potential


def potential_from_spec(spec: PotentialSpec) -> Potential:
    return build_potential(spec.terms, spec.p, spec.alpha, symmetrize=spec.symmetrize)


def product_potential(
    w_terms: Sequence[tuple[complex, float]],
    envelope: Envelope,
    p: int,
    alpha: float,
    symmetrize: bool = True,
) -> Potential:
    """
    Build V = gamma * W for an almost periodic W = sum c exp(-i phi x).

    Args:
        w_terms: (c, phi) pairs of the trigonometric sum W.
        envelope: The common decaying factor gamma.
    """
    terms = [
        TermSpec(c_re=complex(c).real, c_im=complex(c).imag, phi=phi, envelope=envelope)
        for c, phi in w_terms
    ]
    return build_potential(terms, p, alpha, symmetrize=symmetrize)


def eval_potential(pot: Potential, x: float) -> tuple[float, list[complex]]:
    """
    Evaluate V(x) and the individual terms beta_k(x).

    Raises:
        PotentialValidationError: If x < 0 or the potential is not certified real.
    """
    if x < 0:
        raise PotentialValidationError(f"x must be >= 0, got {x}")
    if not pot.is_real:
        raise PotentialValidationError("potential is not closed under conjugation")
    term_values = [t.value(x) for t in pot.terms]
    return float(sum(term_values, 0j).real), term_values


def sigma(pot: Potential, x: float) -> float:
    """sigma(x) = max_k |gamma_k(x)|."""
    return max((abs(t.envelope.value(x)) for t in pot.terms), default=0.0)


def _step_union_lp(envelopes: Sequence[Envelope], p: int, a: float) -> float:
    cuts = sorted({b for env in envelopes for b in env.breakpoints})  # type: ignore[union-attr]
    total = 0.0
    for lo, hi in zip(cuts, cuts[1:]):
        lo_eff = max(lo, a)
        if hi <= lo_eff:
            continue
        level = max(abs(env.value(lo)) for env in envelopes)
        total += level**p * (hi - lo_eff)
    return total


def _quadrature_lp(pot: Potential, envelopes: Sequence[Envelope], a: float) -> float:
    p = pot.p
    breaks = sorted(
        {b for env in envelopes if env.kind == "step-train" for b in env.breakpoints}
    )
    tail_start = max([a] + breaks)
    cuts = [a] + [b for b in breaks if b > a]
    if cuts[-1] != tail_start:
        cuts.append(tail_start)

    def integrand(x: float) -> float:
        return max(abs(env.value(x)) for env in envelopes) ** p

    total = 0.0
    for lo, hi in zip(cuts, cuts[1:]):
        value, _ = integrate.quad(integrand, lo, hi, epsrel=LP_TAIL_EPSREL, limit=200)
        total += value
    value, _ = integrate.quad(integrand, tail_start, np.inf, epsrel=LP_TAIL_EPSREL, limit=200)
    return total + value


def lp_tail(pot: Potential, a: float) -> tuple[float, str]:
    """
    Integral of sigma(x)^p over [a, inf).

    Returns:
        The value and the method used ("closed-form" or "quadrature").
    """
    envelopes = list(dict.fromkeys(t.envelope for t in pot.terms if t.envelope.kind != "zero"))
    p = pot.p
    if not envelopes:
        return 0.0, "closed-form"
    if len(envelopes) == 1:
        return envelopes[0].lp_integral(p, a), "closed-form"
    kinds = {env.kind for env in envelopes}
    if kinds == {"exponential"}:
        slowest = min(envelopes, key=lambda env: env.rate)  # type: ignore[union-attr]
        return slowest.lp_integral(p, a), "closed-form"
    if kinds == {"power-decay"} and len({env.x0 for env in envelopes}) == 1:  # type: ignore[union-attr]
        slowest = min(envelopes, key=lambda env: env.exponent)  # type: ignore[union-attr]
        return slowest.lp_integral(p, a), "closed-form"
    if kinds == {"step-train"}:
        return _step_union_lp(envelopes, p, a), "closed-form"
    return _quadrature_lp(pot, envelopes, a), "quadrature"


def envelope_stats(pot: Potential, x: float, a: float) -> EnvelopeStats:
    """
    Compute sigma(x), tau and the L^p tail of sigma beyond a.

    Args:
        pot: The potential.
        x: Point for sigma, x >= 0.
        a: Start of the tail integral, a >= 0.
    """
    if x < 0 or a < 0:
        raise PotentialValidationError(f"x and a must be >= 0, got x={x}, a={a}")
    tail, method = lp_tail(pot, a)
    return EnvelopeStats(sigma_at_x=sigma(pot, x), tau=pot.tau, lp_tail=tail, lp_method=method)


def tail_tau(pot: Potential, a: float) -> float:
    """max_k Var(gamma_k, [a, inf))."""
    return max((t.envelope.tail_variation(a) for t in pot.terms), default=0.0)


def _almost_periodic_modulus(pot: Potential):
    c = np.array([t.c for t in pot.terms], dtype=complex)
    phi = np.array([t.phi for t in pot.terms], dtype=float)

    def modulus(x: float) -> float:
        return float(abs(np.dot(c, np.exp(-1j * phi * x))))

    return modulus


def ap_window_bounds(
    pot: Potential, T: float, a_max: float, grid_step: float
) -> tuple[float, float]:
    """
    Min and max over window starts a in [0, a_max] of the integral of |W| over [a, a+T].

    Only the almost periodic factor W(x) = sum c_k exp(-i phi_k x) is used;
    envelopes are ignored. Window starts lie on a uniform grid.

    Returns:
        (delta, Delta).
    """
    if T <= 0:
        raise PotentialValidationError(f"window length T must be positive, got {T}")
    if grid_step <= 0:
        raise PotentialValidationError(f"grid_step must be positive, got {grid_step}")
    if pot.is_empty or pot.coefficient_l1 == 0.0:
        return 0.0, 0.0

    modulus = _almost_periodic_modulus(pot)
    starts = np.arange(0.0, a_max + grid_step / 2, grid_step)
    integrals = [
        integrate.quad(modulus, a, a + T, epsrel=WINDOW_EPSREL, epsabs=1e-13, limit=500)[0]
        for a in starts
    ]
    delta, big_delta = min(integrals), max(integrals)
    logger.debug(
        f"[PotentialService] Window bounds T={T} over {len(starts)} starts: "
        f"delta={delta}, Delta={big_delta}"
    )
    return delta, big_delta


def lp_transfer_check(pot: Potential, T: float, n_windows: int) -> tuple[float, float]:
    """
    Check (delta/T) * int_0^{nT} |gamma| <= int_0^{nT} |W gamma| + Var(gamma, [0, nT]) * Delta.

    Applies to product potentials whose terms share one envelope; delta and
    Delta are taken over the windows [kT, (k+1)T] actually summed.

    Returns:
        (lhs, rhs).
    """
    envelopes = {t.envelope for t in pot.terms}
    if len(envelopes) != 1:
        raise PotentialValidationError("lp_transfer_check needs a single shared envelope")
    if n_windows < 1:
        raise PotentialValidationError(f"n_windows must be >= 1, got {n_windows}")
    (envelope,) = envelopes
    modulus = _almost_periodic_modulus(pot)
    end = n_windows * T
    delta, big_delta = ap_window_bounds(pot, T, (n_windows - 1) * T, T)

    breaks = [b for b in getattr(envelope, "breakpoints", ()) if 0 < b < end]
    gamma_l1 = integrate.quad(
        lambda x: abs(envelope.value(x)), 0.0, end, points=breaks or None, limit=500
    )[0]
    product_l1 = sum(
        integrate.quad(
            lambda x: modulus(x) * abs(envelope.value(x)),
            k * T,
            (k + 1) * T,
            epsrel=WINDOW_EPSREL,
            limit=500,
        )[0]
        for k in range(n_windows)
    )
    lhs = delta / T * gamma_l1
    rhs = product_l1 + envelope.variation_on(0.0, end) * big_delta
    return lhs, rhs
