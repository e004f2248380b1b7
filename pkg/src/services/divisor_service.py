"""
Recursive small-divisor functions h_J, f_{J,K}, g_{J,K} and their algebra.

All evaluators are generic over the scalar type: Fraction arguments give
exact Fraction results (a vanishing denominator is an exact zero), float
arguments give floats (a denominator below POLE_TOLERANCE counts as a pole).
Mixed input is coerced to the type of eta.
"""

import math
import random
from collections import Counter
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, combinations_with_replacement, permutations
from typing import Callable, Iterable, Literal, Sequence

from src.config.logging_conf import get_logger
from src.models.divisor import IdentityReport, Number, SymFunction
from src.utils.errors import PoleError

logger = get_logger(__name__)

POLE_TOLERANCE = 1e-12
MEMO_SIZE = 1 << 16

OMEGA = {-1: Fraction(1, 2), 0: Fraction(-1), 1: Fraction(1, 2)}


def omega_value(a: int) -> Fraction:
    return OMEGA.get(a, Fraction(0))


def _coerce(eta: Number, phis: Iterable[Number]) -> tuple[Number, tuple[Number, ...]]:
    if isinstance(eta, (Fraction, int)):
        return Fraction(eta), tuple(Fraction(phi) for phi in phis)
    return float(eta), tuple(float(phi) for phi in phis)


def _is_exact(eta: Number) -> bool:
    return isinstance(eta, Fraction)


def _check_denominator(den: Number, indices: Iterable[int]) -> None:
    vanishes = den == 0 if isinstance(den, Fraction) else abs(den) < POLE_TOLERANCE
    if vanishes:
        raise PoleError(den, tuple(indices))


def _zero(eta: Number) -> Number:
    return Fraction(0) if _is_exact(eta) else 0.0


def _one(eta: Number) -> Number:
    return Fraction(1) if _is_exact(eta) else 1.0


# --- h_J -------------------------------------------------------------------


@lru_cache(maxsize=MEMO_SIZE)
def _h(eta: Number, phis: tuple[Number, ...], exact: bool) -> Number:
    J = len(phis)
    if J == 0:
        return _one(eta)
    den = eta - sum(phis, _zero(eta))
    _check_denominator(den, range(J))
    # the second factor drops phi_J
    total = sum(
        (_h(eta, phis[:j], exact) * _h(eta, phis[j : J - 1], exact) for j in range(J)),
        _zero(eta),
    )
    return total / den


def eval_h(J: int, eta: Number, phis: Sequence[Number]) -> Number:
    """
    Evaluate h_J(eta; phi_1, ..., phi_J).

    h_0 = 1 and h_J = (eta - phi_1 - ... - phi_J)^{-1}
    * sum_{j<J} h_j(phi_1..phi_j) h_{J-j-1}(phi_{j+1}..phi_{J-1}).
    h_J is not symmetric in the phi arguments.

    Raises:
        PoleError: If a prefix denominator eta - phi_1 - ... - phi_j vanishes.
    """
    if J < 0 or len(phis) != J:
        raise ValueError(f"h_{J} needs exactly {J} phi arguments, got {len(phis)}")
    eta, phis_t = _coerce(eta, phis)
    return _h(eta, phis_t, _is_exact(eta))


# --- f_{J,K}, g_{J,K} -------------------------------------------------------


@lru_cache(maxsize=MEMO_SIZE)
def _fg(J: int, K: int, eta: Number, phis: tuple[Number, ...], exact: bool) -> tuple[Number, Number]:
    zero = _zero(eta)
    if J <= 0 or K < 0 or K > J:
        return zero, zero
    _check_denominator(eta, ())
    if J == 1:
        f = (_one(eta) if K == 1 else -_one(eta)) / eta
    else:
        f = zero
        for k in (K - 1, K, K + 1):
            weight = omega_value(K - k)
            if not 0 <= k <= J - 1:
                continue
            # symmetric average over the dropped argument
            dropped = sum(
                (_fg(J - 1, k, eta, phis[:i] + phis[i + 1 :], exact)[1] for i in range(J)),
                zero,
            )
            f += weight * dropped / J
        f = f / eta
    if K == 0:
        return f, zero
    den = K * eta - sum(phis, zero)
    _check_denominator(den, range(J))
    return f, -2 * K * f / den


def eval_fg(J: int, K: int, eta: Number, phis: Sequence[Number]) -> tuple[Number, Number]:
    """
    Evaluate (f_{J,K}, g_{J,K}) at (eta; phis).

    Outside 1 <= J, 0 <= K <= J both functions are zero by convention.

    Raises:
        PoleError: If K*eta - sum(phi) vanishes for some required (J', K').
    """
    if J >= 1 and len(phis) != J:
        raise ValueError(f"f_{J},{K} needs exactly {J} phi arguments, got {len(phis)}")
    eta, phis_t = _coerce(eta, phis)
    return _fg(J, K, eta, tuple(sorted(phis_t)), _is_exact(eta))


def eval_f(J: int, K: int, eta: Number, phis: Sequence[Number]) -> Number:
    return eval_fg(J, K, eta, phis)[0]


def eval_g(J: int, K: int, eta: Number, phis: Sequence[Number]) -> Number:
    return eval_fg(J, K, eta, phis)[1]


# --- SymFunction catalogue --------------------------------------------------


def f_function(J: int, K: int) -> SymFunction:
    return SymFunction(max(J, 0), lambda eta, phis: eval_f(J, K, eta, phis), f"f_{J},{K}")


def g_function(J: int, K: int) -> SymFunction:
    return SymFunction(max(J, 0), lambda eta, phis: eval_g(J, K, eta, phis), f"g_{J},{K}")


def h_function(J: int) -> SymFunction:
    return SymFunction(J, lambda eta, phis: eval_h(J, eta, phis), f"h_{J}", symmetric=False)


def omega(a: int) -> SymFunction:
    """omega_a as a function of one phi argument."""
    return SymFunction(1, lambda eta, phis: omega_value(a) * _one(eta), f"omega_{a}")


def xi(J: int, K: int) -> SymFunction:
    def evaluator(eta: Number, phis: tuple[Number, ...]) -> Number:
        if J != 1:
            return _zero(eta)
        sign = 1 if (K - 1) % 2 == 0 else -1
        return sign * _one(eta) / eta

    return SymFunction(J, evaluator, f"xi_{J},{K}")


def breve(fn: SymFunction) -> SymFunction:
    """The same function with all phi arguments negated."""
    return SymFunction(
        fn.arity,
        lambda eta, phis: fn.evaluator(eta, tuple(-phi for phi in phis)),
        f"breve({fn.label})",
        symmetric=fn.symmetric,
    )


def scale(fn: SymFunction, factor: Number) -> SymFunction:
    return SymFunction(
        fn.arity,
        lambda eta, phis: factor * fn.evaluator(eta, phis),
        f"{factor}*{fn.label}",
        symmetric=fn.symmetric,
    )


def add(*fns: SymFunction) -> SymFunction:
    arity = fns[0].arity
    if any(fn.arity != arity for fn in fns):
        raise ValueError("can only add functions of equal arity")
    return SymFunction(
        arity,
        lambda eta, phis: sum((fn.evaluator(eta, phis) for fn in fns), _zero(eta)),
        " + ".join(fn.label for fn in fns),
        symmetric=all(fn.symmetric for fn in fns),
    )


def _split_average(p: SymFunction, q: SymFunction, eta: Number, phis: tuple[Number, ...]) -> Number:
    n = len(phis)
    splits: Counter = Counter()
    for chosen in combinations(range(n), p.arity):
        rest = [phis[i] for i in range(n) if i not in chosen]
        splits[(tuple(sorted(phis[i] for i in chosen)), tuple(sorted(rest)))] += 1
    total = sum(
        (count * p.evaluator(eta, left) * q.evaluator(eta, right) for (left, right), count in splits.items()),
        _zero(eta),
    )
    return total / math.comb(n, p.arity)


def _permutation_average(
    p: SymFunction, q: SymFunction, eta: Number, phis: tuple[Number, ...]
) -> Number:
    total = _zero(eta)
    for order in permutations(phis):
        total += p.evaluator(eta, order[: p.arity]) * q.evaluator(eta, order[p.arity :])
    return total / math.factorial(len(phis))


def sym_product(p: SymFunction, q: SymFunction) -> SymFunction:
    """
    Symmetric product p ⊙ q of arity p.arity + q.arity.

    Averages p(first I args) * q(remaining args) over all permutations. For
    symmetric factors this equals the multinomially weighted average over
    distinct multiset splits, which is what gets evaluated.
    """

    def evaluator(eta: Number, phis: tuple[Number, ...]) -> Number:
        if p.symmetric and q.symmetric:
            return _split_average(p, q, eta, phis)
        return _permutation_average(p, q, eta, phis)

    return SymFunction(p.arity + q.arity, evaluator, f"({p.label} ⊙ {q.label})")


def sym_product_by_permutations(p: SymFunction, q: SymFunction) -> SymFunction:
    """Reference definition of p ⊙ q summing over all (I+J)! permutations."""
    return SymFunction(
        p.arity + q.arity,
        lambda eta, phis: _permutation_average(p, q, eta, phis),
        f"({p.label} ⊙ₚ {q.label})",
    )


def symmetrized_h(J: int) -> SymFunction:
    """(1/J!) * sum over permutations of h_J."""

    def evaluator(eta: Number, phis: tuple[Number, ...]) -> Number:
        total = sum((eval_h(J, eta, order) for order in permutations(phis)), _zero(eta))
        return total / math.factorial(J)

    return SymFunction(J, evaluator, f"sym h_{J}")


# --- script G ---------------------------------------------------------------


@lru_cache(maxsize=MEMO_SIZE)
def _script_g(J: int, eta: Number, phis: tuple[Number, ...], exact: bool) -> Number:
    total = _zero(eta)
    for j in range(1, J):
        for k in range(1, min(j, J - j) + 1):
            product = sym_product(g_function(j, k), breve(g_function(J - j, k)))
            total += Fraction(1, 4 * k) * product.evaluator(eta, phis)
    return total


def eval_scriptG(J: int, eta: Number, phis: Sequence[Number]) -> Number:
    """
    Evaluate 𝒢_{J,0} = sum_{j=1}^{J-1} sum_{k=1}^{min(j,J-j)} (1/4k) g_{j,k} ⊙ breve(g)_{J-j,k}.

    It satisfies f_{J,0} - breve(f)_{J,0} = -(phi_1 + ... + phi_J) 𝒢_{J,0}.

    Raises:
        PoleError: Propagated from the g evaluations.
    """
    if J < 2 or len(phis) != J:
        raise ValueError(f"𝒢_{J},0 needs J >= 2 and exactly J phi arguments")
    eta, phis_t = _coerce(eta, phis)
    return _script_g(J, eta, tuple(sorted(phis_t)), _is_exact(eta))


def script_g_function(J: int) -> SymFunction:
    return SymFunction(J, lambda eta, phis: eval_scriptG(J, eta, phis), f"𝒢_{J},0")


# --- combinatorics ----------------------------------------------------------


def catalan(J: int) -> int:
    return math.comb(2 * J, J) // (J + 1)


def critical_points(
    frequencies: Sequence[Number],
    p: int,
    system: Literal["schrodinger", "oprl", "opuc"] = "schrodinger",
) -> list[Number]:
    """
    Candidate exceptional energies eta = sum of k frequencies minus sum of l frequencies, k + l < p.

    On the unit circle only combinations with k - l = 1 survive rotation of
    the measure.
    """
    if system not in ("schrodinger", "oprl", "opuc"):
        raise ValueError(f"unknown system {system!r}")
    points = set()
    for k in range(p):
        for l in range(p - k):
            if k + l == 0 or (system == "opuc" and k - l != 1):
                continue
            for plus in combinations_with_replacement(frequencies, k):
                for minus in combinations_with_replacement(frequencies, l):
                    points.add(sum(plus) - sum(minus))
    return sorted(points)


# --- identity verification --------------------------------------------------


def random_rational(rng: random.Random, bound: int = 1000, positive: bool = False) -> Fraction:
    low = 1 if positive else -bound
    return Fraction(rng.randint(low, bound), rng.randint(1, bound))


def _sample(rng: random.Random, J: int) -> tuple[Fraction, tuple[Fraction, ...]]:
    return random_rational(rng, positive=True), tuple(random_rational(rng) for _ in range(J))


def _run_identity(
    report: IdentityReport,
    rng: random.Random,
    J: int,
    discrepancy: Callable[[Fraction, tuple[Fraction, ...]], Fraction],
    max_resamples: int = 50,
) -> IdentityReport:
    for _ in range(report.trials):
        for _attempt in range(max_resamples):
            eta, phis = _sample(rng, J)
            try:
                value = discrepancy(eta, phis)
            except PoleError:
                continue
            report.record(value, f"eta={eta}, phis={[str(phi) for phi in phis]}")
            break
        else:
            report.witnesses.append("no pole-free sample point found")
    return report


def _composition(lhs: SymFunction, left: Callable[[int, int], SymFunction], J: int, K: int, k: int):
    rhs = scale(
        add(*(sym_product(left(j, k), g_function(J - j, K - k)) for j in range(J + 1))),
        Fraction(1, 2),
    )

    def discrepancy(eta, phis):
        return lhs(eta, phis) - rhs(eta, phis)

    return discrepancy


def _g_composition(J: int, K: int, k: int):
    return _composition(g_function(J, K), g_function, J, K, k)


def _f_composition(J: int, K: int, k: int):
    return _composition(f_function(J, K), f_function, J, K, k)


def _breve_difference(J: int):
    f = f_function(J, 0)
    difference = add(f, scale(breve(f), -1))
    script_g = script_g_function(J)

    def discrepancy(eta, phis):
        return difference(eta, phis) + sum(phis, Fraction(0)) * script_g(eta, phis)

    return discrepancy


def _h_symmetrization(J: int):
    sym_h = symmetrized_h(J)

    def discrepancy(eta, phis):
        return eval_g(J, 1, eta, phis) + 2 / eta**J * sym_h(eta, phis)

    return discrepancy


def _h_homogeneity(J: int, rng: random.Random):
    def discrepancy(eta, phis):
        lam = random_rational(rng)
        while lam == 0:
            lam = random_rational(rng)
        scaled = eval_h(J, lam * eta, [lam * phi for phi in phis])
        return scaled - eval_h(J, eta, phis) / lam**J

    return discrepancy


def verify_identities(
    J_max: int = 5, trials: int = 100, seed: int = 0, catalan_max: int = 12
) -> list[IdentityReport]:
    """
    Verify the exact identities of the divisor algebra at random rational points.

    Identities:
        g_composition: g_{J,K} = 1/2 sum_j g_{j,k} ⊙ g_{J-j,K-k}, 0 < k < K <= J.
        f_composition: f_{J,K} = 1/2 sum_j f_{j,k} ⊙ g_{J-j,K-k}, 0 < k < K <= J.
        breve_difference: f_{J,0} - breve(f)_{J,0} = -(sum phi) 𝒢_{J,0}, 2 <= J.
        h_symmetrization: g_{J,1} = -(2/eta^J) (1/J!) sum_sigma h_J(phi_sigma).
        h_homogeneity: h_J(lam eta; lam phi) = lam^{-J} h_J(eta; phi).
        catalan: C_J = sum_j C_j C_{J-j-1}, J <= catalan_max.

    Args:
        J_max: Largest J tested, >= 2.
        trials: Random points per (identity, J, K, k), >= 1.
        seed: Seed of the rational sampler.
        catalan_max: Largest J for the Catalan recursion.

    Returns:
        One IdentityReport per (identity, J, K, k); each passes with exact
        discrepancy 0.
    """
    if J_max < 2 or trials < 1:
        raise ValueError("verify_identities needs J_max >= 2 and trials >= 1")
    rng = random.Random(seed)
    reports: list[IdentityReport] = []

    for J in range(2, J_max + 1):
        for K in range(2, J + 1):
            for k in range(1, K):
                report = IdentityReport("g_composition", J, K, k, trials)
                reports.append(_run_identity(report, rng, J, _g_composition(J, K, k)))
                report = IdentityReport("f_composition", J, K, k, trials)
                reports.append(_run_identity(report, rng, J, _f_composition(J, K, k)))
    for J in range(2, J_max + 1):
        report = IdentityReport("breve_difference", J, 0, 0, trials)
        reports.append(_run_identity(report, rng, J, _breve_difference(J)))
    for J in range(1, J_max + 1):
        report = IdentityReport("h_symmetrization", J, 1, 0, trials)
        reports.append(_run_identity(report, rng, J, _h_symmetrization(J)))
        report = IdentityReport("h_homogeneity", J, 0, 0, trials)
        reports.append(_run_identity(report, rng, J, _h_homogeneity(J, rng)))
    for J in range(1, catalan_max + 1):
        report = IdentityReport("catalan", J, 0, 0, 1)
        recursion = sum(catalan(j) * catalan(J - j - 1) for j in range(J))
        report.record(Fraction(catalan(J) - recursion), f"C_{J}={catalan(J)}, recursion={recursion}")
        reports.append(report)

    failed = [r for r in reports if not r.passed]
    logger.info(
        f"[DivisorService] Verified {len(reports)} identity cases "
        f"(J_max={J_max}, trials={trials}, seed={seed}): {len(failed)} failed"
    )
    for r in failed:
        logger.error(
            f"[DivisorService] {r.identity} J={r.J} K={r.K} k={r.k} "
            f"max discrepancy {r.max_discrepancy}: {r.witnesses}"
        )
    return reports
