"""
Tests for the Prüfer and Schrödinger integrators.

The raw Schrödinger integration serves as the oracle for the Prüfer system.
"""

import math
import random

import numpy as np
import pytest
from scipy import integrate

from src.models.trajectory import IntegratorDiagnostics, SolutionTrajectory
from src.schemas.potential import (
    ExponentialEnvelope,
    PowerDecayEnvelope,
    StepTrainEnvelope,
    ZeroEnvelope,
)
from src.services.bound_service import total_bound
from src.services.potential_service import build_potential
from src.services.prufer_service import PruferService
from src.services.scan_service import ScanService
from src.utils.errors import DegenerateStateError, PotentialValidationError
from tests.conftest import term


def _solution(x, u, du, energy=1.0) -> SolutionTrajectory:
    return SolutionTrajectory(
        energy=energy,
        x=np.asarray(x),
        u=np.asarray(u),
        du=np.asarray(du),
        diagnostics=IntegratorDiagnostics(steps=0, nfev=0, tol=1e-10),
    )


def test_zero_potential_keeps_initial_data(prufer_service, zero_potential):
    traj = prufer_service.integrate_prufer(zero_potential, eta=3.0, x_max=20.0, theta0=0.4)

    assert np.all(traj.theta == 0.4)
    assert np.all(traj.log_r == 0.0)
    assert traj.energy == pytest.approx(2.25)
    assert traj.diagnostics.steps > 0
    assert prufer_service.measure_log_r_oscillation(traj) == 0.0


def test_prufer_rejects_complex_potential(prufer_service, single_term_potential):
    with pytest.raises(PotentialValidationError):
        prufer_service.integrate_prufer(single_term_potential, eta=2.0, x_max=1.0)


def test_prufer_rejects_bad_arguments(prufer_service, zero_potential):
    with pytest.raises(ValueError):
        prufer_service.integrate_prufer(zero_potential, eta=0.0, x_max=1.0)
    with pytest.raises(ValueError):
        PruferService(tol=0.0)


def test_prufer_samples_on_requested_grid(prufer_service, mixed_potential):
    grid = np.linspace(0.0, 30.0, 61)
    traj = prufer_service.integrate_prufer(mixed_potential, eta=2.2, x_max=30.0, t_eval=grid)

    assert np.array_equal(traj.x, grid)
    assert traj.log_r[0] == 0.0
    assert traj.diagnostics.max_theta_jump < math.pi / 2
    assert len(list(traj.samples)) == 61


@pytest.mark.parametrize(
    "u0, du0, expected",
    [(0.0, 1.0, np.sin), (1.0, 0.0, np.cos)],
)
def test_free_schrodinger_solutions(prufer_service, zero_potential, u0, du0, expected):
    grid = np.linspace(0.0, 20.0, 201)
    traj = prufer_service.integrate_schrodinger(zero_potential, 1.0, 20.0, u0, du0, t_eval=grid)

    assert np.max(np.abs(traj.u - expected(grid))) < 1e-7
    assert np.max(np.abs(traj.quadratic - 1.0)) < 1e-7


def test_schrodinger_rejects_zero_initial_data(prufer_service, zero_potential):
    with pytest.raises(DegenerateStateError):
        prufer_service.integrate_schrodinger(zero_potential, 1.0, 10.0, 0.0, 0.0)


def test_wronskian_is_constant(prufer_service, mixed_potential):
    grid = np.linspace(0.0, 50.0, 501)
    first = prufer_service.integrate_schrodinger(mixed_potential, 1.3, 50.0, 0.0, 1.0, t_eval=grid)
    second = prufer_service.integrate_schrodinger(mixed_potential, 1.3, 50.0, 1.0, 0.0, t_eval=grid)

    wronskian = first.wronskian(second)
    assert np.max(np.abs(wronskian - wronskian[0])) < 1e-6
    assert wronskian[0] == pytest.approx(-1.0)


def test_prufer_from_sine():
    x = np.linspace(0.0, 10.0, 101)
    traj = PruferService.prufer_from_solution(_solution(x, np.sin(x), np.cos(x)), eta=2.0)

    assert np.max(np.abs(traj.log_r)) < 1e-12
    assert np.max(np.abs(traj.theta)) < 1e-12


def test_prufer_from_scaled_sine_is_renormalized():
    x = np.linspace(0.0, 10.0, 101)
    traj = PruferService.prufer_from_solution(
        _solution(x, 2 * np.sin(x), 2 * np.cos(x)), eta=2.0
    )
    assert np.max(np.abs(traj.log_r)) < 1e-12


def test_prufer_from_solution_checks_energy_and_zero_state():
    x = np.linspace(0.0, 1.0, 3)
    with pytest.raises(ValueError):
        PruferService.prufer_from_solution(_solution(x, np.sin(x), np.cos(x)), eta=3.0)
    with pytest.raises(DegenerateStateError) as exc_info:
        PruferService.prufer_from_solution(_solution(x, [1.0, 0.0, 1.0], [0.0, 0.0, 1.0]), eta=2.0)
    assert exc_info.value.index == 1


def test_routes_agree(prufer_service, mixed_potential):
    _, _, discrepancy = prufer_service.compare_routes(
        mixed_potential, eta=3.0, x_max=50.0, theta0=0.3, n_samples=501
    )
    assert discrepancy < 1e-6


@pytest.mark.slow
def test_resonant_energy_grows(prufer_service, wigner_von_neumann_potential):
    """V = 4 cos(x) / (1 + x) resonates at eta = 1 and log R grows like 2 log x."""
    grid = np.linspace(0.0, 400.0, 4001)
    direct, reconstructed, discrepancy = prufer_service.compare_routes(
        wigner_von_neumann_potential, eta=1.0, x_max=400.0, n_samples=4001
    )

    log_r = np.interp([50.0, 200.0, 400.0], grid, direct.log_r)
    assert log_r[2] - log_r[0] > 1.0
    assert log_r[2] - log_r[1] > 0.5
    assert discrepancy < 1e-4
    assert ScanService.growth_statistic(direct) > 0.5


@pytest.mark.slow
def test_off_resonant_energy_stays_bounded(prufer_service, wigner_von_neumann_potential):
    grid = np.linspace(0.0, 500.0, 5001)
    traj = prufer_service.integrate_prufer(wigner_von_neumann_potential, 5.0, 500.0, t_eval=grid)

    tail = traj.log_r[grid >= 100.0]
    assert np.max(np.abs(tail - tail[0])) < 0.1


def test_oscillatory_integral_zero_envelope(prufer_service):
    pot = build_potential([term(1.0, 0.0, ZeroEnvelope())], p=2, alpha=0.5)
    assert prufer_service.osc_integral_bound_check(pot, [0], 1, 2.0, 0.0, 10.0) == (0.0, 0.0)


def test_oscillatory_integral_free_background(prufer_service, zero_potential):
    """With theta constant the integrand is -(eta - phi) e^{i (eta - phi) x} / (1 + x)."""
    pot = build_potential(
        [term(1.0, 1.0, PowerDecayEnvelope(exponent=1.0))], p=2, alpha=0.5, symmetrize=False
    )
    lhs, rhs = prufer_service.osc_integral_bound_check(
        pot, [0], 1, 3.0, 0.0, 100.0, background=zero_potential
    )

    re = integrate.quad(lambda x: 1 / (1 + x), 0.0, 100.0, weight="cos", wvar=2.0)[0]
    im = integrate.quad(lambda x: 1 / (1 + x), 0.0, 100.0, weight="sin", wvar=2.0)[0]
    assert lhs == pytest.approx(2 * abs(complex(re, im)), rel=1e-7)
    assert rhs == 2.0
    assert lhs <= rhs


def test_oscillatory_integral_rejects_bad_ranges(prufer_service, mixed_potential):
    with pytest.raises(ValueError):
        prufer_service.osc_integral_bound_check(mixed_potential, [], 0, 2.0, 0.0, 1.0)
    with pytest.raises(ValueError):
        prufer_service.osc_integral_bound_check(mixed_potential, [0], 2, 2.0, 0.0, 1.0)
    with pytest.raises(ValueError):
        prufer_service.osc_integral_bound_check(mixed_potential, [0], 1, 2.0, 5.0, 1.0)


@pytest.mark.slow
def test_oscillatory_integral_random_sweep(mixed_potential):
    service = PruferService(tol=1e-9)
    rng = random.Random(50)
    n = len(mixed_potential.terms)
    for _ in range(50):
        J = rng.randint(1, 3)
        indices = [rng.randrange(n) for _ in range(J)]
        K = rng.randint(0, J)
        eta = rng.uniform(0.5, 5.0)
        a = rng.uniform(0.0, 20.0)
        b = a + rng.uniform(1.0, 20.0)
        lhs, rhs = service.osc_integral_bound_check(mixed_potential, indices, K, eta, a, b)
        assert lhs <= rhs + 1e-8


def _route_potentials(wigner, mixed):
    power = PowerDecayEnvelope(exponent=1.0)
    return [
        wigner,
        mixed,
        build_potential([term(0.4, 1.3, ExponentialEnvelope(rate=0.1))], p=2, alpha=0.5),
        build_potential(
            [term(0.3, 0.8, power), term(0.2, 2.1, PowerDecayEnvelope(exponent=0.75))],
            p=3,
            alpha=0.4,
        ),
        build_potential(
            [term(0.5, 1.7, StepTrainEnvelope(breakpoints=(0.0, 40.0, 120.0), values=(1.0, -0.5, 0.0)))],
            p=2,
            alpha=0.5,
        ),
    ]


@pytest.mark.slow
def test_routes_agree_across_potentials_and_energies(
    wigner_von_neumann_potential, mixed_potential
):
    service = PruferService(tol=1e-10)
    for pot in _route_potentials(wigner_von_neumann_potential, mixed_potential):
        for eta in np.linspace(0.6, 5.0, 20):
            _, _, discrepancy = service.compare_routes(pot, float(eta), 200.0, n_samples=2001)
            assert discrepancy < 1e-6, f"eta={eta}"


def _random_p2_potential(rng: random.Random):
    terms = []
    for _ in range(rng.randint(1, 2)):
        if rng.random() < 0.5:
            envelope = PowerDecayEnvelope(exponent=rng.uniform(0.6, 1.5))
        else:
            envelope = ExponentialEnvelope(rate=rng.uniform(0.02, 0.5))
        terms.append(term(rng.uniform(0.05, 0.5), rng.uniform(0.5, 2.5), envelope))
    return build_potential(terms, p=2, alpha=0.5)


@pytest.mark.slow
def test_log_r_oscillation_within_total_bound():
    service = PruferService(tol=1e-10)
    rng = random.Random(60)
    grid = np.linspace(0.0, 500.0, 5001)
    for _ in range(10):
        pot = _random_p2_potential(rng)
        frequencies = [t.phi for t in pot.terms]
        etas: list[float] = []
        while len(etas) < 10:
            eta = rng.uniform(0.5, 5.0)
            if min(abs(eta - phi) for phi in frequencies) > 0.2:
                etas.append(eta)
        for eta in etas:
            traj = service.integrate_prufer(pot, eta, 500.0, rng.uniform(0.0, math.pi), t_eval=grid)
            bound = total_bound(pot, eta).total
            assert service.measure_log_r_oscillation(traj) <= bound + 1e-6
