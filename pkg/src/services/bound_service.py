"""
Small-divisor sums, error sums and the explicit boundedness estimate.

Sums run over all J-tuples of the finite term list. Functions symmetric in
their phi arguments (g_{J,K}, f_{J,K}, 𝒢_{J,0}) are summed over multisets with
multinomial multiplicities; h_j is not symmetric and is summed over ordered
tuples. By default evaluation is in floating point; ``exact=True`` converts
eta and the frequencies to Fractions and evaluates the divisor functions
exactly.
"""

import math
from fractions import Fraction
from itertools import combinations_with_replacement, product
from typing import Callable, Iterable, Optional

from src.config.logging_conf import get_logger
from src.models.bounds import BoundBreakdown, CompositionCheck, SumValue
from src.models.divisor import Number
from src.models.potential import Potential
from src.services import divisor_service as divisors
from src.services.potential_service import lp_tail, sigma, tail_tau
from src.utils.errors import InfiniteBoundError, PoleError

logger = get_logger(__name__)

Evaluator = Callable[[Number, list[Number]], Number]


def _multiplicity(indices: tuple[int, ...]) -> int:
    count = math.factorial(len(indices))
    for i in set(indices):
        count //= math.factorial(indices.count(i))
    return count


def _tuple_sum(
    pot: Potential,
    J: int,
    eta: float,
    evaluator: Evaluator,
    ordered: bool,
    exact: bool = False,
    negate: bool = False,
    envelope_weights: Optional[list[float]] = None,
) -> SumValue:
    n = len(pot.terms)
    sign = -1 if negate else 1
    if exact:
        eta_n: Number = Fraction(eta)
        phis: list[Number] = [sign * Fraction(t.phi) for t in pot.terms]
    else:
        eta_n = float(eta)
        phis = [sign * t.phi for t in pot.terms]
    moduli = [abs(t.c) for t in pot.terms]
    if envelope_weights is not None:
        moduli = [m * w for m, w in zip(moduli, envelope_weights)]

    result = SumValue()
    exact_total = Fraction(0)
    tuples: Iterable[tuple[int, ...]] = (
        product(range(n), repeat=J) if ordered else combinations_with_replacement(range(n), J)
    )
    for indices in tuples:
        multiplicity = 1 if ordered else _multiplicity(indices)
        weight = math.prod(moduli[i] for i in indices)
        try:
            value = evaluator(eta_n, [phis[i] for i in indices])
        except PoleError:
            result.mark_pole(indices)
            continue
        result.add(weight * abs(float(value)), multiplicity)
        if exact:
            exact_total += multiplicity * Fraction(weight) * abs(Fraction(value))
    if exact and result.finite:
        result.exact_value = exact_total
        result.value = float(exact_total)
    return result


def small_divisor_sum(pot: Potential, j: int, eta: float, exact: bool = False) -> SumValue:
    """
    Sum over ordered j-tuples of |c_{k1} ... c_{kj} h_j(eta; phi_{k1}, ..., phi_{kj})|.

    Args:
        pot: The potential.
        j: Tuple length, 1 <= j <= p - 1.
        eta: Energy parameter.
        exact: Evaluate h_j in exact rational arithmetic.

    Returns:
        SumValue, infinite with pole_hits when a tuple hits an exact pole.
    """
    if not 1 <= j <= pot.p - 1:
        raise ValueError(f"j must satisfy 1 <= j <= p-1 = {pot.p - 1}, got {j}")
    return _tuple_sum(
        pot, j, eta, lambda e, phis: divisors.eval_h(j, e, phis), ordered=True, exact=exact
    )


def _sum_g(pot: Potential, J: int, K: int, eta: float, exact: bool = False, negate: bool = False) -> SumValue:
    if J < 1 or not 1 <= K <= J:
        return SumValue()
    return _tuple_sum(
        pot,
        J,
        eta,
        lambda e, phis: divisors.eval_g(J, K, e, phis),
        ordered=False,
        exact=exact,
        negate=negate,
    )


def sum_E(pot: Potential, J: int, K: int, eta: float, exact: bool = False) -> SumValue:
    """
    E_{J,K} = sum over J-tuples of |c_{m1} ... c_{mJ} g_{J,K}(eta; phi_m)|.

    Zero unless 1 <= K <= J.
    """
    if J < 1:
        raise ValueError(f"J must be >= 1, got {J}")
    return _sum_g(pot, J, K, eta, exact=exact)


def _sum_script_g(pot: Potential, J: int, eta: float, exact: bool = False) -> SumValue:
    return _tuple_sum(
        pot, J, eta, lambda e, phis: divisors.eval_scriptG(J, e, phis), ordered=False, exact=exact
    )


def sum_scriptE(pot: Potential, J: int, eta: float, exact: bool = False) -> SumValue:
    """ℰ_{J,0} = sum over J-tuples of |c_{m1} ... c_{mJ} 𝒢_{J,0}(eta; phi_m)|, 2 <= J <= p."""
    if not 2 <= J <= pot.p:
        raise ValueError(f"J must satisfy 2 <= J <= p = {pot.p}, got {J}")
    return _sum_script_g(pot, J, eta, exact=exact)


def script_S_envelope(pot: Potential, J: int, K: int, eta: float, x: float) -> tuple[float, float]:
    """
    Absolute bound on the sum of f_{J,K} beta_{m1}(x) ... beta_{mJ}(x).

    Returns:
        (lhs, rhs) with lhs the absolute sum and
        rhs = (1/eta) sum_a |omega_a| E_{J-1,K+a} (sum |c|) sigma(x)^J.
    """
    if not 2 <= J <= pot.p or not 0 <= K <= J:
        raise ValueError(f"need 2 <= J <= p and 0 <= K <= J, got J={J}, K={K}")
    gammas = [abs(t.envelope.value(x)) for t in pot.terms]
    lhs_sum = _tuple_sum(
        pot,
        J,
        eta,
        lambda e, phis: divisors.eval_f(J, K, e, phis),
        ordered=False,
        envelope_weights=gammas,
    )
    rhs = 0.0
    for a in (-1, 0, 1):
        e_sum = _sum_g(pot, J - 1, K + a, eta)
        weight = abs(float(divisors.omega_value(a)))
        if e_sum.value:
            rhs += weight * e_sum.value
    rhs = rhs / eta * pot.coefficient_l1 * sigma(pot, x) ** J
    return lhs_sum.value, rhs


def _require_finite(label: str, value: SumValue) -> float:
    if not value.finite:
        raise InfiniteBoundError(f"{label} is infinite", value.pole_hits)
    return value.value


def _assemble(pot: Potential, eta: float, a: float, tau: float) -> BoundBreakdown:
    p = pot.p
    for j in range(1, p):
        _require_finite(f"small divisor sum j={j}", small_divisor_sum(pot, j, eta))

    term1 = 0.0
    for j in range(1, p):
        for k in range(1, j + 1):
            term1 += _require_finite(f"E_{j},{k}", sum_E(pot, j, k, eta)) / k * tau**j
    term2 = 0.0
    for J in range(2, p + 1):
        term2 += _require_finite(f"ℰ_{J},0", sum_scriptE(pot, J, eta)) * tau**J
    top = sum(_require_finite(f"E_{p - 1},{k}", sum_E(pot, p - 1, k, eta)) for k in range(p))
    tail, _ = lp_tail(pot, a)
    term3 = 2.0 / eta * top * pot.coefficient_l1 * tail
    return BoundBreakdown(eta=eta, a=a, term1=term1, term2=term2, term3=term3)


def total_bound(pot: Potential, eta: float, a: float = 0.0) -> BoundBreakdown:
    """
    Estimate of |log R(b) - log R(a)| uniform in b > a.

    term1 = sum_{j<p} sum_{k<=j} (1/k) E_{j,k} tau^j,
    term2 = sum_{2<=J<=p} ℰ_{J,0} tau^J,
    term3 = (2/eta) sum_{k=0}^{p-1} E_{p-1,k} (sum |c|) int_a^inf sigma^p.

    Raises:
        InfiniteBoundError: If any constituent sum is infinite.
    """
    breakdown = _assemble(pot, eta, a, pot.tau)
    logger.debug(f"[BoundService] total bound at eta={eta}, a={a}: {breakdown.total}")
    return breakdown


def tail_bound(pot: Potential, eta: float, a: float) -> BoundBreakdown:
    """The same estimate with tau replaced by the tail variation max_k Var(gamma_k, [a, inf))."""
    return _assemble(pot, eta, a, tail_tau(pot, a))


def s_chain_bound(pot: Potential, J: int, eta: float) -> float:
    """sum_{K=1}^{J} (1/K) E_{J,K} tau^J, the error of one step of the chain."""
    return sum(
        _require_finite(f"E_{J},{K}", sum_E(pot, J, K, eta)) / K * pot.tau**J
        for K in range(1, J + 1)
    )


def composition_laws(pot: Potential, eta: float, J_max: int = 3) -> list[CompositionCheck]:
    """
    Numerical instances of the composition inequalities.

    E_{J,K} <= 1/2 sum_j E_{j,k} E_{J-j,K-k} for 0 < k < K <= J, and
    ℰ_{J,0} <= sum_j sum_k (1/4k) E_{j,k} breve(E)_{J-j,k}, where breve(E) is
    taken over negated frequencies (equal to E for conjugate-closed potentials).
    Cases with an infinite constituent are skipped.
    """
    checks: list[CompositionCheck] = []
    cache: dict[tuple[int, int, bool], SumValue] = {}

    def e(J: int, K: int, negate: bool = False) -> SumValue:
        key = (J, K, negate)
        if key not in cache:
            cache[key] = _sum_g(pot, J, K, eta, negate=negate)
        return cache[key]

    for J in range(2, J_max + 1):
        for K in range(2, J + 1):
            for k in range(1, K):
                parts = [(e(j, k), e(J - j, K - k)) for j in range(1, J)]
                lhs = e(J, K)
                if not lhs.finite or any(not x.finite or not y.finite for x, y in parts):
                    continue
                rhs = 0.5 * sum(x.value * y.value for x, y in parts)
                checks.append(CompositionCheck("E_composition", J, K, k, lhs.value, rhs))
    for J in range(2, J_max + 1):
        lhs = _sum_script_g(pot, J, eta)
        parts = [
            (k, e(j, k), e(J - j, k, negate=True))
            for j in range(1, J)
            for k in range(1, min(j, J - j) + 1)
        ]
        if not lhs.finite or any(not x.finite or not y.finite for _, x, y in parts):
            continue
        rhs = sum(x.value * y.value / (4 * k) for k, x, y in parts)
        checks.append(CompositionCheck("scriptE_composition", J, 0, 0, lhs.value, rhs))
    return checks
