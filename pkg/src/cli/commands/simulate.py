"""
Prüfer trajectories with the Schrödinger oracle and the boundedness estimate.
"""

from pathlib import Path

from src.cli.utils.checks import write_checks
from src.cli.utils.logging_decorator import log_command_call
from src.config.logging_conf import get_logger
from src.models.potential import Potential
from src.models.reports import CheckResult
from src.models.trajectory import PruferTrajectory
from src.repositories.csv_repository import TRAJECTORY_FIELDS, CsvRepository
from src.schemas.config import ExperimentConfig, SimulateParams
from src.services.bound_service import total_bound
from src.services.potential_service import ap_window_bounds, lp_transfer_check, potential_from_spec
from src.services.prufer_service import PruferService
from src.utils.errors import InfiniteBoundError

logger = get_logger(__name__)

BOUND_SLACK = 1e-6


def _write_trajectory(repo: CsvRepository, name: str, traj: PruferTrajectory, tol: float) -> None:
    repo.write(name, traj.samples, header_lines=[f"eta={traj.eta!r} tol={tol!r}"])


def _window_checks(pot: Potential, params: SimulateParams) -> list[CheckResult]:
    T, n = params.window_T, params.n_windows
    case = f"T={T!r} windows={n}"
    _, big_delta = ap_window_bounds(pot, T, (n - 1) * T, T / 8)
    # |W| <= sum |c| pointwise
    checks = [CheckResult("ap_window_bound", case, big_delta, T * pot.coefficient_l1, slack=BOUND_SLACK)]
    if len({t.envelope for t in pot.terms}) == 1:
        lhs, rhs = lp_transfer_check(pot, T, n)
        checks.append(CheckResult("lp_transfer", case, lhs, rhs, slack=BOUND_SLACK))
    else:
        logger.info("[Command] Terms do not share one envelope, lp transfer check skipped")
    return checks


@log_command_call
def run_simulate(cfg: ExperimentConfig, out_dir: Path) -> int:
    params = cfg.simulate
    pot = potential_from_spec(cfg.potential)
    service = PruferService(tol=params.tol)
    repo = CsvRepository[tuple](out_dir, TRAJECTORY_FIELDS)
    checks: list[CheckResult] = []
    osc_b = min(params.osc_b, params.x_max)

    for i, eta in enumerate(params.etas):
        direct, oracle, discrepancy = service.compare_routes(
            pot, eta, params.x_max, params.theta0, params.tol, params.n_samples
        )
        _write_trajectory(repo, f"trajectory_{i:03d}.csv", direct, params.tol)
        _write_trajectory(repo, f"oracle_{i:03d}.csv", oracle, params.tol)
        case = f"eta={eta!r}"
        checks.append(CheckResult("route_equivalence", case, discrepancy, params.route_tolerance))
        for index in range(len(pot.terms)):
            lhs, rhs = service.osc_integral_bound_check(
                pot, [index], 1, eta, 0.0, osc_b, params.tol, params.theta0
            )
            checks.append(
                CheckResult("osc_integral_bound", f"{case} term={index}", lhs, rhs, slack=BOUND_SLACK)
            )
        try:
            bound = total_bound(pot, eta).total
        except InfiniteBoundError as e:
            logger.info(f"[Command] No finite bound at eta={eta}: {e}")
            continue
        oscillation = service.measure_log_r_oscillation(direct)
        checks.append(CheckResult("log_r_bound", case, oscillation, bound, slack=BOUND_SLACK))

    checks.extend(_window_checks(pot, params))
    return write_checks(out_dir, "simulate_checks.csv", checks)
