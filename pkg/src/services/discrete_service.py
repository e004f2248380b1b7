"""
Discrete Prüfer recursions for orthogonal polynomials.

For a coefficient alpha_n and psi_n = (n + 1) eta + 2 theta_n, with c = 0 for
OPUC and c = 1 for OPRL,

    r_{n+1} / r_n = |1 - alpha_n e^{i psi_n} - c conj(alpha_n)|
                    / sqrt(|1 - c alpha_n|^2 - |alpha_n|^2),
    e^{2 i (theta_{n+1} - theta_n)} = conj(D_n) / D_n,
    D_n = 1 - alpha_n e^{i psi_n} - c conj(alpha_n).

theta increments take half the principal argument, in (-pi/2, pi/2].
"""

import cmath
import math
from dataclasses import dataclass, field
from typing import Literal, Optional, Sequence

import numpy as np

from src.config.logging_conf import get_logger
from src.models.bounds import SumValue
from src.models.trajectory import DiscreteTrajectory
from src.schemas.potential import Envelope, TermSpec
from src.services.potential_service import symmetrize_terms
from src.utils.errors import PoleError, PotentialValidationError, RadicandError

logger = get_logger(__name__)

POLE_TOLERANCE = 1e-12
Origin = Literal["opuc-direct", "oprl-derived"]


def discrete_tail_variation(envelope: Envelope, M: int) -> float:
    """sum_{n >= M} |gamma_{n+1} - gamma_n| for the envelope sampled at integers."""
    if envelope.kind == "zero":
        return 0.0
    if envelope.kind in ("power-decay", "exponential"):
        # decreasing to 0, so the sum telescopes
        return envelope.value(M)
    last = math.ceil(max(envelope.breakpoints)) + 1  # type: ignore[union-attr]
    return sum(abs(envelope.value(n + 1) - envelope.value(n)) for n in range(M, max(M, last)))


def _term_values(terms: Sequence[TermSpec], N: int) -> np.ndarray:
    n = np.arange(N)
    values = np.zeros(N, dtype=complex)
    for term in terms:
        gamma = np.array([term.envelope.value(float(k)) for k in n])
        values += term.c * np.exp(-1j * term.phi * n) * gamma
    return values


@dataclass(frozen=True, eq=False)
class CoeffSequence:
    """
    Recursion coefficients alpha_0..alpha_{N-1}.

    OPUC sequences hold the Verblunsky coefficients directly. OPRL sequences
    hold Jacobi parameters a_n and b_{n+1}; alpha_n then depends on eta.
    ``terms`` is the structured representation sum_l c_l e^{-i n phi_l} gamma^{(l)}_n
    when one is known.
    """

    origin: Origin
    values: Optional[np.ndarray] = None
    a: Optional[np.ndarray] = None
    b_next: Optional[np.ndarray] = None
    terms: tuple[TermSpec, ...] = field(default=())

    @classmethod
    def opuc(cls, values: Sequence[complex], terms: Sequence[TermSpec] = ()) -> "CoeffSequence":
        array = np.asarray(values, dtype=complex)
        if array.size and np.max(np.abs(array)) >= 1:
            index = int(np.argmax(np.abs(array)))
            raise PotentialValidationError(f"Verblunsky coefficient |alpha_{index}| >= 1")
        return cls(origin="opuc-direct", values=array, terms=tuple(terms))

    @classmethod
    def oprl(
        cls, a: Sequence[float], b_next: Sequence[float], terms: Sequence[TermSpec] = ()
    ) -> "CoeffSequence":
        a_arr = np.asarray(a, dtype=float)
        b_arr = np.asarray(b_next, dtype=float)
        if a_arr.shape != b_arr.shape:
            raise PotentialValidationError("a and b sequences differ in length")
        if a_arr.size and np.min(a_arr) <= 0:
            raise PotentialValidationError("Jacobi parameters a_n must be positive")
        return cls(origin="oprl-derived", a=a_arr, b_next=b_arr, terms=tuple(terms))

    @property
    def c(self) -> int:
        return 0 if self.origin == "opuc-direct" else 1

    def __len__(self) -> int:
        source = self.values if self.origin == "opuc-direct" else self.a
        return 0 if source is None else len(source)

    def alphas(self, eta: float) -> np.ndarray:
        if self.origin == "opuc-direct":
            return self.values  # type: ignore[return-value]
        return np.array([oprl_alpha(a, b, eta) for a, b in zip(self.a, self.b_next)])  # type: ignore[arg-type]


def oprl_alpha(a_n: float, b_next: float, eta: float) -> complex:
    """
    alpha_n = (a_n^2 - 1 + e^{i eta/2} b_{n+1}) / (e^{i eta} - 1).

    Raises:
        PoleError: If eta is a multiple of 2 pi.
    """
    if a_n <= 0:
        raise PotentialValidationError(f"a_n must be positive, got {a_n}")
    den = cmath.exp(1j * eta) - 1
    if abs(den) < POLE_TOLERANCE:
        raise PoleError(den, message=f"e^(i eta) = 1 at eta={eta}")
    return (a_n**2 - 1 + cmath.exp(0.5j * eta) * b_next) / den


def phase_ratio(alpha, eta, n, theta, c: int):
    """
    The ratio giving e^{2 i (theta_{n+1} - theta_n)}.

    Works elementwise on numpy arrays as well as on scalars.
    """
    psi = (n + 1) * eta + 2 * theta
    denominator = 1 - alpha * np.exp(1j * psi) - c * np.conj(alpha)
    # the numerator is the conjugate of the denominator
    return np.exp(-2j * np.angle(denominator))


def prufer_step(alpha: complex, eta: float, n: int, theta: float, c: int) -> tuple[float, float]:
    """
    One step of the discrete Prüfer recursion.

    Returns:
        (log(r_{n+1} / r_n), theta_{n+1}).

    Raises:
        RadicandError: If |1 - c alpha|^2 - |alpha|^2 <= 0.
    """
    radicand = abs(1 - c * alpha) ** 2 - abs(alpha) ** 2
    if radicand <= 0:
        raise RadicandError(n, radicand)
    psi = (n + 1) * eta + 2 * theta
    denominator = 1 - alpha * cmath.exp(1j * psi) - c * alpha.conjugate()
    log_ratio = math.log(abs(denominator)) - 0.5 * math.log(radicand)
    arg = cmath.phase(denominator.conjugate() / denominator)
    if arg == -math.pi:
        arg = math.pi
    return log_ratio, theta + 0.5 * arg


def run_discrete(seq: CoeffSequence, eta: float, theta0: float = 0.0, N: Optional[int] = None) -> DiscreteTrajectory:
    """
    Fold prufer_step over n = 0..N-1.

    Returns:
        DiscreteTrajectory with N + 1 samples and log r_0 = 0.

    Raises:
        RadicandError: With the offending index.
    """
    N = len(seq) if N is None else N
    if N > len(seq):
        raise ValueError(f"sequence has {len(seq)} coefficients, {N} requested")
    alphas = seq.alphas(eta)
    c = seq.c
    log_r = np.zeros(N + 1)
    theta = np.empty(N + 1)
    theta[0] = theta0
    for n in range(N):
        try:
            step, theta[n + 1] = prufer_step(complex(alphas[n]), eta, n, float(theta[n]), c)
        except RadicandError:
            logger.error(f"[DiscreteService] Non-positive radicand at n={n}, eta={eta}")
            raise
        log_r[n + 1] = log_r[n] + step
    return DiscreteTrajectory(eta=eta, c=c, log_r=log_r, theta=theta)


def szego_compare(seq: CoeffSequence, eta: float, N: int) -> float:
    """
    Compare the OPUC Prüfer amplitude with the Szegő recursion at z = e^{i eta}.

    Uses b_n = Phi_n^*(z) / Phi_n(z), b_0 = 1, b_{n+1} = (b_n - alpha_n z) / (z - conj(alpha_n) b_n)
    and log|Phi_{n+1}| = log|Phi_n| + log|1 - conj(alpha_n) b_n conj(z)|.

    Returns:
        max over n <= N of |log r_n + 1/2 sum_{k<n} log(1 - |alpha_k|^2) - log|Phi_n(z)||.
    """
    if seq.origin != "opuc-direct":
        raise ValueError("szego_compare needs an OPUC sequence")
    traj = run_discrete(seq, eta, 0.0, N)
    alphas = seq.alphas(eta)
    z = cmath.exp(1j * eta)
    b = 1 + 0j
    log_phi = 0.0
    correction = 0.0
    deviation = 0.0
    for n in range(N):
        alpha = complex(alphas[n])
        log_phi += math.log(abs(1 - alpha.conjugate() * b * z.conjugate()))
        b = (b - alpha * z) / (z - alpha.conjugate() * b)
        correction += 0.5 * math.log(1 - abs(alpha) ** 2)
        deviation = max(deviation, abs(traj.log_r[n + 1] + correction - log_phi))
    logger.debug(f"[DiscreteService] Szegő deviation at eta={eta}, N={N}: {deviation:.3g}")
    return deviation


def discrete_sum_bound_check(
    seq: CoeffSequence,
    plus: Sequence[int],
    minus: Sequence[int],
    k: int,
    eta: float,
    M: int,
    N: int,
    background: Optional[CoeffSequence] = None,
) -> tuple[float, float]:
    """
    Check the discrete summation-by-parts estimate for one tuple of terms.

    With Gamma_n the product of the envelopes of ``plus`` and the conjugated
    envelopes of ``minus``, phi the signed frequency sum and theta_n from the
    recursion of ``background`` (default: ``seq``), the sum over n = M..N of

        e^{-i n phi} Gamma_n e^{i k psi_n} (e^{-i (k eta - phi)} - e^{2 i k (theta_{n+1} - theta_n)})

    is compared with 2 * prod_l sum_{n >= M} |gamma^{(l)}_{n+1} - gamma^{(l)}_n|.

    Returns:
        (lhs, rhs).
    """
    if len(plus) + len(minus) < 1:
        raise ValueError("need at least one term")
    if not 0 <= M <= N:
        raise ValueError(f"need 0 <= M <= N, got M={M}, N={N}")
    terms = seq.terms
    chosen = [terms[i] for i in plus] + [terms[i] for i in minus]
    rhs = 2 * math.prod(discrete_tail_variation(t.envelope, M) for t in chosen)

    source = background if background is not None else seq
    theta = run_discrete(source, eta, 0.0, N + 1).theta
    phi = sum(terms[i].phi for i in plus) - sum(terms[i].phi for i in minus)
    shift = cmath.exp(-1j * (k * eta - phi))
    total = 0j
    for n in range(M, N + 1):
        gamma = math.prod(t.envelope.value(float(n)) for t in chosen)
        if gamma == 0:
            continue
        psi = (n + 1) * eta + 2 * theta[n]
        chi = cmath.exp(-1j * n * phi) * cmath.exp(1j * k * psi)
        total += gamma * chi * (shift - cmath.exp(2j * k * (theta[n + 1] - theta[n])))
    return abs(total), rhs


def structured_sequence(terms: Sequence[TermSpec], N: int) -> CoeffSequence:
    """alpha_n = sum_l c_l e^{-i n phi_l} gamma^{(l)}(n) for n < N, as an OPUC sequence."""
    return CoeffSequence.opuc(_term_values(terms, N), terms)


def oprl_sequence(
    a_minus_one_terms: Sequence[TermSpec], b_terms: Sequence[TermSpec], N: int
) -> CoeffSequence:
    """
    Jacobi parameters from structured forms of a_n - 1 and b_{n+1}.

    Both term lists are symmetrized under conjugation so the sequences are
    real; ``b_terms`` describe n -> b_{n+1}.
    """
    a_part = symmetrize_terms(a_minus_one_terms) if a_minus_one_terms else []
    b_part = symmetrize_terms(b_terms) if b_terms else []
    a = 1 + _term_values(a_part, N).real
    b_next = _term_values(b_part, N).real
    return CoeffSequence.oprl(a, b_next, tuple(a_part) + tuple(b_part))


def discrete_small_divisor_sum(terms: Sequence[TermSpec], eta: float) -> SumValue:
    """
    sum_l |c_l / (e^{-i (eta - phi_l)} - 1)|, infinite at eta in phi_l + 2 pi Z.
    """
    result = SumValue()
    for index, term in enumerate(terms):
        den = cmath.exp(-1j * (eta - term.phi)) - 1
        if abs(den) < POLE_TOLERANCE:
            result.mark_pole((index,))
            continue
        result.add(abs(term.c) / abs(den))
    return result
