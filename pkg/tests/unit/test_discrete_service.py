"""
Tests for the discrete Prüfer recursions on the real line and the unit circle.
"""

import cmath
import math
import random

import numpy as np
import pytest

from src.schemas.potential import (
    ExponentialEnvelope,
    PowerDecayEnvelope,
    StepTrainEnvelope,
    ZeroEnvelope,
)
from src.services.discrete_service import (
    CoeffSequence,
    discrete_small_divisor_sum,
    discrete_sum_bound_check,
    discrete_tail_variation,
    oprl_alpha,
    oprl_sequence,
    phase_ratio,
    prufer_step,
    run_discrete,
    structured_sequence,
    szego_compare,
)
from src.utils.errors import PoleError, PotentialValidationError, RadicandError
from tests.conftest import term

POWER = PowerDecayEnvelope(exponent=1.0)


def test_oprl_alpha_vanishes_for_free_parameters():
    assert oprl_alpha(1.0, 0.0, 1.3) == 0


def test_oprl_alpha_modulus_at_half_turn():
    beta = 0.6
    assert abs(oprl_alpha(1.0, beta, math.pi)) == pytest.approx(beta / 2)


def test_oprl_alpha_from_off_diagonal():
    alpha = oprl_alpha(math.sqrt(2), 0.0, math.pi)
    assert alpha.real == pytest.approx(-0.5)
    assert alpha.imag == pytest.approx(0.0, abs=1e-15)


@pytest.mark.parametrize("eta", [0.0, 2 * math.pi])
def test_oprl_alpha_pole(eta):
    with pytest.raises(PoleError):
        oprl_alpha(1.0, 0.5, eta)


def test_oprl_alpha_rejects_non_positive_a():
    with pytest.raises(PotentialValidationError):
        oprl_alpha(0.0, 0.5, 1.0)


@pytest.mark.parametrize("c", [0, 1])
def test_prufer_step_with_zero_coefficient(c):
    assert prufer_step(0j, 1.7, 4, 0.3, c) == (0.0, 0.3)


def test_prufer_step_matches_unit_circle_formula():
    rng = random.Random(8)
    for n in range(20):
        alpha = cmath.rect(rng.uniform(0.0, 0.9), rng.uniform(-math.pi, math.pi))
        eta, theta = rng.uniform(0.1, 3.0), rng.uniform(-1.0, 1.0)
        log_ratio, theta_next = prufer_step(alpha, eta, n, theta, 0)

        psi = (n + 1) * eta + 2 * theta
        expected = math.log(abs(1 - alpha * cmath.exp(1j * psi))) - 0.5 * math.log(1 - abs(alpha) ** 2)
        assert log_ratio == pytest.approx(expected, abs=1e-14)
        assert abs(theta_next - theta) <= math.pi / 2


@pytest.mark.parametrize("alpha, c", [(1.0 + 0j, 0), (0.5 + 0j, 1), (0.6 + 0j, 1)])
def test_prufer_step_rejects_non_positive_radicand(alpha, c):
    with pytest.raises(RadicandError) as exc_info:
        prufer_step(alpha, 1.0, 7, 0.0, c)
    assert exc_info.value.n == 7


@pytest.mark.parametrize("c", [0, 1])
def test_phase_ratio_is_unimodular(c):
    rng = np.random.default_rng(3)
    size = 100_000
    radius = 0.9 if c == 0 else 0.45
    alpha = rng.uniform(0.0, radius, size) * np.exp(1j * rng.uniform(-np.pi, np.pi, size))
    theta = rng.uniform(-5.0, 5.0, size)
    eta = rng.uniform(0.0, 2 * np.pi, size)
    n = rng.integers(0, 10_000, size)

    ratio = phase_ratio(alpha, eta, n, theta, c)
    assert np.max(np.abs(np.abs(ratio) - 1.0)) <= 1e-15

    psi = (n + 1) * eta + 2 * theta
    quotient = (1 - np.conj(alpha) * np.exp(-1j * psi) - c * alpha) / (
        1 - alpha * np.exp(1j * psi) - c * np.conj(alpha)
    )
    assert np.allclose(ratio, quotient, rtol=0, atol=1e-12)


def test_run_discrete_zero_coefficients():
    seq = CoeffSequence.opuc(np.zeros(50))
    traj = run_discrete(seq, 0.8, theta0=0.25)

    assert len(traj.log_r) == 51
    assert np.all(traj.log_r == 0.0)
    assert np.all(traj.theta == 0.25)
    assert traj.c == 0
    assert list(traj.samples)[-1] == (50, 0.0, 0.25)


def test_run_discrete_rejects_long_request():
    with pytest.raises(ValueError):
        run_discrete(CoeffSequence.opuc(np.zeros(5)), 1.0, N=6)


def test_run_discrete_unit_circle_tail_is_cauchy():
    N = 10_000
    seq = structured_sequence([term(0.5, 1.0, POWER)], N)
    traj = run_discrete(seq, 2.5)

    tail = traj.log_r[N // 2 :]
    assert np.all(np.isfinite(traj.log_r))
    assert np.max(np.abs(tail - tail[0])) < 0.1
    assert szego_compare(seq, 2.5, 2000) <= 1e-9


def test_run_discrete_jacobi_parameters_complete():
    N = 1000
    n = np.arange(N)
    seq = CoeffSequence.oprl(np.ones(N), np.cos(n) / (n + 1))
    traj = run_discrete(seq, math.pi / 2)

    assert traj.c == 1
    assert np.all(np.isfinite(traj.log_r))


def test_oprl_sequence_from_terms():
    seq = oprl_sequence([], [term(1.0, 1.0, POWER)], 100)
    n = np.arange(100)

    assert np.allclose(seq.a, 1.0)
    assert np.allclose(seq.b_next, np.cos(n) / (n + 1))
    assert len(seq) == 100
    assert np.all(np.isfinite(run_discrete(seq, math.pi / 2).log_r))


def test_coefficient_sequences_validate_input():
    with pytest.raises(PotentialValidationError):
        CoeffSequence.opuc([0.1, 1.0])
    with pytest.raises(PotentialValidationError):
        CoeffSequence.oprl([1.0, 0.0], [0.0, 0.0])
    with pytest.raises(PotentialValidationError):
        CoeffSequence.oprl([1.0], [0.0, 0.0])


def test_szego_zero_coefficients_exact():
    assert szego_compare(CoeffSequence.opuc(np.zeros(30)), 1.0, 30) == 0.0


def test_szego_constant_coefficient():
    assert szego_compare(CoeffSequence.opuc(np.full(100, 0.3)), 1.0, 100) <= 1e-10


@pytest.mark.parametrize("seed", range(20))
def test_szego_random_coefficients(seed):
    rng = np.random.default_rng(seed)
    values = rng.uniform(0.0, 0.8, 200) * np.exp(1j * rng.uniform(-np.pi, np.pi, 200))
    eta = rng.uniform(0.1, 2 * np.pi - 0.1)
    assert szego_compare(CoeffSequence.opuc(values), eta, 200) <= 1e-9


def test_szego_needs_unit_circle_sequence():
    with pytest.raises(ValueError):
        szego_compare(CoeffSequence.oprl(np.ones(3), np.zeros(3)), 1.0, 3)


def test_sum_bound_zero_envelopes():
    seq = structured_sequence([term(1.0, 0.3, ZeroEnvelope())], 60)
    assert discrete_sum_bound_check(seq, [0], [], 1, 1.2, 0, 50) == (0.0, 0.0)


def test_sum_bound_free_background():
    M, N = 10, 400
    seq = structured_sequence([term(0.5, 0.7, POWER)], N + 2)
    background = CoeffSequence.opuc(np.zeros(N + 2))

    lhs, rhs = discrete_sum_bound_check(seq, [0], [], 1, 1.9, M, N, background=background)
    assert rhs == pytest.approx(2 / (M + 1))
    assert lhs <= rhs


def test_sum_bound_random_configurations():
    terms = [
        term(0.2, 0.7, POWER),
        term(0.15, 1.9, ExponentialEnvelope(rate=0.01)),
        term(0.1j, 2.6, PowerDecayEnvelope(exponent=0.5)),
    ]
    seq = structured_sequence(terms, 400)
    rng = random.Random(30)
    for _ in range(30):
        s = rng.randint(0, 2)
        t = rng.randint(1 if s == 0 else 0, 2 - s)
        plus = [rng.randrange(3) for _ in range(s)]
        minus = [rng.randrange(3) for _ in range(t)]
        M = rng.randint(0, 50)
        lhs, rhs = discrete_sum_bound_check(
            seq, plus, minus, rng.randint(1, 2), rng.uniform(0.3, 3.0), M, M + 300
        )
        assert lhs <= rhs + 1e-12


def test_sum_bound_rejects_bad_ranges():
    seq = structured_sequence([term(0.5, 0.7, POWER)], 20)
    with pytest.raises(ValueError):
        discrete_sum_bound_check(seq, [], [], 1, 1.0, 0, 10)
    with pytest.raises(ValueError):
        discrete_sum_bound_check(seq, [0], [], 1, 1.0, 11, 10)


def test_discrete_tail_variation_of_step_train():
    step = StepTrainEnvelope(breakpoints=(0.0, 2.0, 4.0, 6.0), values=(1.0, 0.2, 0.6, 0.0))
    assert discrete_tail_variation(step, 0) == pytest.approx(1.8)
    assert discrete_tail_variation(step, 3) == pytest.approx(1.0)
    assert discrete_tail_variation(POWER, 4) == pytest.approx(0.2)


def test_discrete_small_divisor_sum():
    terms = [term(1.0, 0.5, POWER)]

    at_pole = discrete_small_divisor_sum(terms, 0.5)
    assert not at_pole.finite
    assert at_pole.pole_hits == [(0,)]
    assert discrete_small_divisor_sum(terms, 0.5 + math.pi).value == pytest.approx(0.5)


def test_discrete_tail_variation_counts_sign_changes():
    step = StepTrainEnvelope(breakpoints=(0.0, 3.0, 6.0), values=(0.5, -0.5, 0.0))

    assert discrete_tail_variation(step, 0) == pytest.approx(1.5)
    assert discrete_tail_variation(step, 4) == pytest.approx(0.5)
    assert discrete_tail_variation(step, 7) == 0.0


@pytest.mark.parametrize("eta", np.linspace(0.25, 6.0, 24).tolist())
def test_sum_bound_holds_for_sign_changing_step_train(eta):
    step = StepTrainEnvelope(breakpoints=(0.0, 3.0, 6.0), values=(0.5, -0.5, 0.0))
    seq = structured_sequence([term(0.5, 0.0, step)], 10)

    lhs, rhs = discrete_sum_bound_check(seq, [0], [], 1, eta, 0, 8)
    assert rhs == pytest.approx(3.0)
    assert lhs <= rhs
