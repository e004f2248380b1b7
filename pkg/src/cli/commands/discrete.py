"""
Discrete Prüfer trajectories, Szegő comparison and the discrete sum estimate.
"""

from pathlib import Path

from src.cli.utils.checks import write_checks
from src.cli.utils.logging_decorator import log_command_call
from src.config.logging_conf import get_logger
from src.models.reports import CheckResult
from src.repositories.csv_repository import DISCRETE_FIELDS, CsvRepository
from src.schemas.config import DiscreteParams, ExperimentConfig
from src.services.discrete_service import (
    CoeffSequence,
    discrete_sum_bound_check,
    oprl_sequence,
    run_discrete as run_discrete_trajectory,
    structured_sequence,
    szego_compare,
)
from src.utils.errors import PotentialValidationError, RadicandError

logger = get_logger(__name__)

SUM_BOUND_SLACK = 1e-10


def build_sequence(params: DiscreteParams) -> CoeffSequence:
    """Build the coefficient sequence described by the [discrete] section."""
    if params.kind == "opuc":
        if params.terms:
            return structured_sequence(params.terms, params.N)
        if params.values_re:
            im = params.values_im or (0.0,) * len(params.values_re)
            return CoeffSequence.opuc([complex(re, i) for re, i in zip(params.values_re, im)])
    else:
        if params.a_minus_one_terms or params.b_terms:
            return oprl_sequence(params.a_minus_one_terms, params.b_terms, params.N)
        if params.a:
            return CoeffSequence.oprl(params.a, params.b_next)
    raise PotentialValidationError(f"no coefficients given for kind={params.kind!r}")


@log_command_call
def run_discrete(cfg: ExperimentConfig, out_dir: Path) -> int:
    params = cfg.discrete
    seq = build_sequence(params)
    N = min(params.N, len(seq))
    repo = CsvRepository[tuple](out_dir, DISCRETE_FIELDS)
    checks: list[CheckResult] = []

    for i, eta in enumerate(params.etas):
        case = f"eta={eta!r}"
        try:
            traj = run_discrete_trajectory(seq, eta, params.theta0, N)
        except RadicandError as e:
            # outside the spectral window for these coefficients; recorded, not a failure
            checks.append(CheckResult("radicand", f"{case} n={e.n}", e.radicand, 0.0, contract=False))
            continue
        repo.write(f"discrete_{i:03d}.csv", traj.samples, header_lines=[f"eta={eta!r} c={traj.c}"])

        if seq.origin == "opuc-direct":
            deviation = szego_compare(seq, eta, N)
            checks.append(CheckResult("szego", case, deviation, params.szego_tolerance))
        if N >= 2:
            for index in range(len(seq.terms)):
                lhs, rhs = discrete_sum_bound_check(seq, (index,), (), 1, eta, 0, N - 2)
                checks.append(
                    CheckResult("sum_bound", f"{case} term={index}", lhs, rhs, slack=SUM_BOUND_SLACK)
                )

    return write_checks(out_dir, "discrete_checks.csv", checks)
