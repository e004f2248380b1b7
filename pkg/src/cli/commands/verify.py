"""
Exact verification of the divisor identities.
"""

from pathlib import Path

from src.cli.utils.logging_decorator import log_command_call
from src.models.divisor import IdentityReport
from src.repositories.csv_repository import IDENTITY_FIELDS, CsvRepository
from src.schemas.config import ExperimentConfig
from src.services.divisor_service import verify_identities


def _row(report: IdentityReport) -> dict:
    return {
        "identity": report.identity,
        "J": report.J,
        "K": report.K,
        "k": report.k,
        "trials": report.trials,
        "max_discrepancy": str(report.max_discrepancy),
        "passed": report.passed,
        "witness": report.witnesses[0] if report.witnesses else "",
    }


@log_command_call
def run_verify(cfg: ExperimentConfig, out_dir: Path) -> int:
    params = cfg.verify
    reports = verify_identities(
        J_max=params.J_max, trials=params.trials, seed=cfg.seed, catalan_max=params.catalan_max
    )
    CsvRepository[dict](out_dir, IDENTITY_FIELDS).write(
        "identities.csv",
        [_row(r) for r in reports],
        header_lines=[f"J_max={params.J_max} trials={params.trials} seed={cfg.seed}"],
    )
    return 0 if all(r.passed for r in reports) else 1
