"""
Small-divisor sums, error sums and the boundedness estimate per energy.
"""

import math
from pathlib import Path

from src.cli.utils.checks import write_checks
from src.cli.utils.logging_decorator import log_command_call
from src.config.logging_conf import get_logger
from src.models.bounds import SumValue
from src.models.potential import Potential
from src.models.reports import CheckResult
from src.repositories.csv_repository import BOUND_FIELDS, CsvRepository
from src.schemas.config import ExperimentConfig
from src.services import bound_service
from src.services.potential_service import potential_from_spec
from src.utils.errors import InfiniteBoundError

logger = get_logger(__name__)

BREAKDOWN_FIELDS = ("eta", "a", "term1", "term2", "term3", "total", "finite_flag")
ENVELOPE_RELATIVE_SLACK = 1e-12


def _sum_row(eta: float, index: int, K: object, value: SumValue) -> dict:
    return {
        "eta": eta,
        "j_or_J": index,
        "K": K,
        "value": value.value,
        "finite_flag": value.finite,
        "terms_used": value.terms_used,
    }


def _sum_rows(pot: Potential, eta: float) -> list[dict]:
    # K is "h" for the small-divisor sums and 0 for the 𝒢 sums
    rows = [
        _sum_row(eta, j, "h", bound_service.small_divisor_sum(pot, j, eta))
        for j in range(1, pot.p)
    ]
    for J in range(1, pot.p):
        for K in range(1, J + 1):
            rows.append(_sum_row(eta, J, K, bound_service.sum_E(pot, J, K, eta)))
    for J in range(2, pot.p + 1):
        rows.append(_sum_row(eta, J, 0, bound_service.sum_scriptE(pot, J, eta)))
    return rows


def _breakdown_row(pot: Potential, eta: float, a: float) -> dict:
    try:
        row = bound_service.total_bound(pot, eta, a).to_dict()
        row["finite_flag"] = True
    except InfiniteBoundError as e:
        logger.info(f"[Command] Infinite bound at eta={eta}: {e}, poles {e.pole_hits}")
        row = {"eta": eta, "a": a, "total": math.inf, "finite_flag": False}
    return row


def _checks(pot: Potential, eta: float, params) -> list[CheckResult]:
    checks = [
        CheckResult(c.law, f"eta={eta!r} J={c.J} K={c.K} k={c.k}", c.lhs, c.rhs * (1 + 1e-9))
        for c in bound_service.composition_laws(pot, eta, params.composition_J_max)
    ]
    for x in params.envelope_points:
        for J in range(2, pot.p + 1):
            for K in range(J + 1):
                lhs, rhs = bound_service.script_S_envelope(pot, J, K, eta, x)
                if not math.isfinite(rhs):
                    continue
                case = f"eta={eta!r} x={x!r} J={J} K={K}"
                checks.append(
                    CheckResult("envelope", case, lhs, rhs * (1 + ENVELOPE_RELATIVE_SLACK))
                )
    return checks


@log_command_call
def run_bound(cfg: ExperimentConfig, out_dir: Path) -> int:
    params = cfg.bound
    pot = potential_from_spec(cfg.potential)
    sums: list[dict] = []
    breakdowns: list[dict] = []
    checks: list[CheckResult] = []
    for eta in params.etas:
        sums.extend(_sum_rows(pot, eta))
        breakdowns.append(_breakdown_row(pot, eta, params.a))
        checks.extend(_checks(pot, eta, params))

    CsvRepository[dict](out_dir, BOUND_FIELDS).write("bound_sums.csv", sums)
    CsvRepository[dict](out_dir, BREAKDOWN_FIELDS).write("bound.csv", breakdowns)
    return write_checks(out_dir, "bound_checks.csv", checks)
