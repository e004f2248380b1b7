"""
Integration of the modified Prüfer system and of the raw Schrödinger equation.

With E = eta^2 / 4 a real solution u of -u'' + V u = E u is written as

    u = R sin(eta x / 2 + theta),   u' = (eta / 2) R cos(eta x / 2 + theta),

and (theta, log R) obey

    theta'  = (V / eta) (cos(eta x + 2 theta) - 1),
    log R'  = (V / eta) sin(eta x + 2 theta).

Both systems are integrated with scipy's Dormand-Prince 5(4) pair.
"""

import math
from typing import Callable, Optional, Sequence

import numpy as np
from scipy import integrate

from src.config.logging_conf import get_logger
from src.models.potential import Potential
from src.models.trajectory import IntegratorDiagnostics, PruferTrajectory, SolutionTrajectory
from src.utils.errors import DegenerateStateError, PotentialValidationError, StepFailure

logger = get_logger(__name__)

DEFAULT_TOL = 1e-10
ENERGY_MATCH_TOL = 1e-12


def _max_step(eta: float) -> float:
    return 0.1 * min(1.0, 2 * math.pi / eta)


def _require_real(pot: Potential) -> Callable[[float], float]:
    if not pot.is_real:
        raise PotentialValidationError("ODE integration needs a potential closed under conjugation")
    return pot.value_function()


class PruferService:
    """
    Service for integrating the Prüfer and Schrödinger systems.

    Args:
        tol: Default rtol = atol passed to the integrator.
    """

    def __init__(self, tol: float = DEFAULT_TOL):
        if tol <= 0:
            raise ValueError(f"tol must be positive, got {tol}")
        self.tol = tol

    def _solve(
        self,
        rhs: Callable[[float, np.ndarray], list[float]],
        y0: Sequence[float],
        x_max: float,
        max_step: float,
        tol: float,
        dense: bool,
    ):
        sol = integrate.solve_ivp(
            rhs,
            (0.0, x_max),
            list(y0),
            method="RK45",
            rtol=tol,
            atol=tol,
            max_step=max_step,
            dense_output=dense,
        )
        if sol.status == -1:
            logger.error(f"[PruferService] Integrator stopped at x={sol.t[-1]}: {sol.message}")
            raise StepFailure(float(sol.t[-1]), sol.message)
        return sol

    def _prufer_solution(self, pot: Potential, eta: float, x_max: float, theta0: float, tol: float, dense: bool):
        if eta <= 0 or x_max <= 0 or tol <= 0:
            raise ValueError(f"need eta > 0, x_max > 0, tol > 0; got {eta}, {x_max}, {tol}")
        potential = _require_real(pot)

        def rhs(x: float, y: np.ndarray) -> list[float]:
            v = potential(x) / eta
            phase = eta * x + 2 * y[0]
            return [v * (math.cos(phase) - 1), v * math.sin(phase)]

        sol = self._solve(rhs, (theta0, 0.0), x_max, _max_step(eta), tol, dense)
        jumps = np.abs(np.diff(sol.y[0]))
        max_jump = float(jumps.max()) if jumps.size else 0.0
        if max_jump > math.pi / 2:
            where = float(sol.t[int(jumps.argmax()) + 1])
            raise StepFailure(where, f"theta jumped by {max_jump} in one step")
        return sol, max_jump

    def integrate_prufer(
        self,
        pot: Potential,
        eta: float,
        x_max: float,
        theta0: float = 0.0,
        tol: Optional[float] = None,
        t_eval: Optional[np.ndarray] = None,
    ) -> PruferTrajectory:
        """
        Integrate (theta, log R) on [0, x_max] from (theta0, 0).

        Args:
            pot: A real potential.
            eta: Energy parameter, E = eta^2 / 4.
            x_max: End of the integration interval.
            theta0: Initial phase.
            tol: Local error tolerance; defaults to the service tolerance.
            t_eval: Optional sample points; accepted steps are returned otherwise.

        Returns:
            PruferTrajectory.

        Raises:
            StepFailure: If the integrator cannot continue.
        """
        tol = tol or self.tol
        sol, max_jump = self._prufer_solution(pot, eta, x_max, theta0, tol, dense=t_eval is not None)
        if t_eval is None:
            x, theta, log_r = sol.t, sol.y[0], sol.y[1]
        else:
            x = np.asarray(t_eval, dtype=float)
            theta, log_r = sol.sol(x)
        diagnostics = IntegratorDiagnostics(
            steps=len(sol.t) - 1, nfev=int(sol.nfev), tol=tol, max_theta_jump=max_jump
        )
        logger.debug(
            f"[PruferService] eta={eta}, x_max={x_max}: {diagnostics.steps} steps, "
            f"log R(x_max)={log_r[-1]:.6g}"
        )
        return PruferTrajectory(
            eta=eta, theta0=theta0, x=x, log_r=log_r, theta=theta, diagnostics=diagnostics
        )

    def integrate_schrodinger(
        self,
        pot: Potential,
        energy: float,
        x_max: float,
        u0: float,
        du0: float,
        tol: Optional[float] = None,
        t_eval: Optional[np.ndarray] = None,
    ) -> SolutionTrajectory:
        """
        Integrate u'' = (V - E) u on [0, x_max] from (u0, du0).

        Raises:
            DegenerateStateError: If (u0, du0) = (0, 0).
            StepFailure: If the integrator cannot continue.
        """
        if u0 == 0 and du0 == 0:
            raise DegenerateStateError(0, 0.0)
        if x_max <= 0:
            raise ValueError(f"x_max must be positive, got {x_max}")
        tol = tol or self.tol
        potential = _require_real(pot)

        def rhs(x: float, y: np.ndarray) -> list[float]:
            return [y[1], (potential(x) - energy) * y[0]]

        max_step = _max_step(2 * math.sqrt(energy)) if energy > 0 else 0.1
        sol = self._solve(rhs, (u0, du0), x_max, max_step, tol, dense=t_eval is not None)
        if t_eval is None:
            x, u, du = sol.t, sol.y[0], sol.y[1]
        else:
            x = np.asarray(t_eval, dtype=float)
            u, du = sol.sol(x)
        diagnostics = IntegratorDiagnostics(steps=len(sol.t) - 1, nfev=int(sol.nfev), tol=tol)
        return SolutionTrajectory(energy=energy, x=x, u=u, du=du, diagnostics=diagnostics)

    @staticmethod
    def prufer_from_solution(traj: SolutionTrajectory, eta: float) -> PruferTrajectory:
        """
        Recover (log R, theta) from sampled (u, u').

        R = sqrt(u^2 + (2 u' / eta)^2) and theta is the unwrapped angle of
        (2 u' / eta, u) minus eta x / 2; log R is renormalized to 0 at the
        first sample.

        Raises:
            DegenerateStateError: If (u, u') = (0, 0) at a sample.
        """
        if abs(eta**2 / 4 - traj.energy) > ENERGY_MATCH_TOL * max(1.0, traj.energy):
            raise ValueError(f"eta={eta} does not match E={traj.energy}")
        scaled = 2 * traj.du / eta
        radius = np.hypot(traj.u, scaled)
        zero = np.flatnonzero(radius == 0)
        if zero.size:
            raise DegenerateStateError(int(zero[0]), float(traj.x[zero[0]]))
        angle = np.unwrap(np.arctan2(traj.u, scaled))
        theta = angle - eta * traj.x / 2
        log_r = np.log(radius)
        log_r = log_r - log_r[0]
        return PruferTrajectory(
            eta=eta,
            theta0=float(theta[0]),
            x=traj.x,
            log_r=log_r,
            theta=theta,
            diagnostics=traj.diagnostics,
        )

    def compare_routes(
        self,
        pot: Potential,
        eta: float,
        x_max: float,
        theta0: float = 0.0,
        tol: Optional[float] = None,
        n_samples: int = 2001,
    ) -> tuple[PruferTrajectory, PruferTrajectory, float]:
        """
        Integrate both routes from matching initial data and compare log R.

        Returns:
            (direct, reconstructed, max absolute log R discrepancy).
        """
        grid = np.linspace(0.0, x_max, n_samples)
        direct = self.integrate_prufer(pot, eta, x_max, theta0, tol, t_eval=grid)
        solution = self.integrate_schrodinger(
            pot, eta**2 / 4, x_max, math.sin(theta0), eta / 2 * math.cos(theta0), tol, t_eval=grid
        )
        reconstructed = self.prufer_from_solution(solution, eta)
        discrepancy = float(np.max(np.abs(direct.log_r - reconstructed.log_r)))
        logger.debug(f"[PruferService] Route discrepancy at eta={eta}: {discrepancy:.3g}")
        return direct, reconstructed, discrepancy

    def osc_integral_bound_check(
        self,
        pot: Potential,
        indices: Sequence[int],
        K: int,
        eta: float,
        a: float,
        b: float,
        tol: Optional[float] = None,
        theta0: float = 0.0,
        background: Optional[Potential] = None,
    ) -> tuple[float, float]:
        """
        Check the oscillatory integral estimate for one tuple of terms.

        The integrand is psi'(x) Gamma(x) with Gamma the product of the
        tuple's envelopes, phi the sum of its frequencies and
        psi = i exp(i (K eta - phi) x + 2 i K theta(x)). theta comes from the
        Prüfer system of ``background`` (default: ``pot`` itself).

        Returns:
            (lhs, rhs) with lhs the modulus of the integral over [a, b] and
            rhs = 2 * prod Var(gamma_m, [a, inf)).
        """
        J = len(indices)
        if J < 1 or not 0 <= K <= J:
            raise ValueError(f"need J >= 1 and 0 <= K <= J, got J={J}, K={K}")
        if not 0 <= a < b:
            raise ValueError(f"need 0 <= a < b, got a={a}, b={b}")
        tol = tol or self.tol
        terms = [pot.terms[i] for i in indices]
        rhs = 2 * math.prod(t.envelope.tail_variation(a) for t in terms)
        if any(t.envelope.kind == "zero" for t in terms):
            return 0.0, rhs

        source = background if background is not None else pot
        sol, _ = self._prufer_solution(source, eta, b, theta0, tol, dense=True)
        potential = source.value_function()
        phi = sum(t.phi for t in terms)
        envelopes = [t.envelope.value for t in terms]
        omega = K * eta - phi

        def integrand(x: float) -> complex:
            theta = sol.sol(x)[0]
            dtheta = potential(x) / eta * (math.cos(eta * x + 2 * theta) - 1)
            gamma = math.prod(env(x) for env in envelopes)
            phase = omega * x + 2 * K * theta
            return -(omega + 2 * K * dtheta) * complex(math.cos(phase), math.sin(phase)) * gamma

        chunk = math.pi / max(1.0, abs(omega), eta)
        cuts = set(np.arange(a, b, chunk).tolist()) | {b}
        for t in terms:
            cuts |= {x for x in getattr(t.envelope, "breakpoints", ()) if a < x < b}
        cuts_sorted = sorted(cuts)
        total = 0j
        for lo, hi in zip(cuts_sorted, cuts_sorted[1:]):
            re, _ = integrate.quad(lambda x: integrand(x).real, lo, hi, epsabs=1e-13, limit=200)
            im, _ = integrate.quad(lambda x: integrand(x).imag, lo, hi, epsabs=1e-13, limit=200)
            total += complex(re, im)
        lhs = abs(total)
        logger.debug(f"[PruferService] Oscillatory integral J={J}, K={K}, eta={eta}: {lhs:.6g} <= {rhs:.6g}")
        return lhs, rhs

    @staticmethod
    def measure_log_r_oscillation(traj: PruferTrajectory) -> float:
        """max over sampled a < b of |log R(b) - log R(a)|."""
        return float(np.max(traj.log_r) - np.min(traj.log_r))
