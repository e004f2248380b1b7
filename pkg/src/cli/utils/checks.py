from pathlib import Path
from typing import Sequence

from src.config.logging_conf import get_logger
from src.models.reports import CheckResult
from src.repositories.csv_repository import CHECK_FIELDS, CsvRepository

logger = get_logger(__name__)


def write_checks(out_dir: Path, name: str, checks: Sequence[CheckResult]) -> int:
    """Write check rows and return 1 if any contract fails, else 0."""
    CsvRepository[CheckResult](out_dir, CHECK_FIELDS).write(name, checks)
    failures = [c for c in checks if c.contract and not c.holds]
    for c in failures:
        logger.error(f"[Command] {c.check} failed for {c.case}: {c.lhs!r} > {c.rhs!r}")
    return 1 if failures else 0
