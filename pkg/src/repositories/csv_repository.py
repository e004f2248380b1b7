"""
CSV repository for experiment outputs.

Rows are written in the order given, floats with repr, and optional header
comment lines prefixed with ``#`` so identical inputs give identical files.
"""

import csv
import dataclasses
from pathlib import Path
from typing import Any, Generic, Iterable, Mapping, Optional, Sequence, TypeVar, Union

from src.config.logging_conf import get_logger

logger = get_logger(__name__)

T = TypeVar("T")

Row = Union[Mapping[str, Any], Any]


def _format(value: Any) -> str:
    if isinstance(value, bool):
        return str(int(value))
    if isinstance(value, float):
        return repr(value)
    if value is None:
        return ""
    return str(value)


class CsvRepository(Generic[T]):
    """
    Repository writing rows of one kind to CSV files under a base directory.

    Rows may be dataclass instances, mappings, or objects with ``to_row()``.
    """

    def __init__(self, base_dir: Path, fieldnames: Sequence[str]):
        self.base_dir = Path(base_dir)
        self.fieldnames = list(fieldnames)

    def _as_dict(self, row: Row) -> Mapping[str, Any]:
        if hasattr(row, "to_row"):
            return row.to_row()
        if dataclasses.is_dataclass(row) and not isinstance(row, type):
            return dataclasses.asdict(row)
        if isinstance(row, Mapping):
            return row
        if isinstance(row, (tuple, list)):
            return dict(zip(self.fieldnames, row))
        raise TypeError(f"cannot convert {type(row).__name__} to a CSV row")

    def write(
        self, name: str, rows: Iterable[T], header_lines: Optional[Sequence[str]] = None
    ) -> Path:
        """
        Write rows to ``base_dir / name``, replacing any existing file.

        Returns:
            The path written.
        """
        path = self.base_dir / name
        path.parent.mkdir(parents=True, exist_ok=True)
        count = 0
        with path.open("w", newline="", encoding="utf-8") as handle:
            for line in header_lines or ():
                handle.write(f"# {line}\n")
            writer = csv.writer(handle, lineterminator="\n")
            writer.writerow(self.fieldnames)
            for row in rows:
                data = self._as_dict(row)
                writer.writerow([_format(data.get(key)) for key in self.fieldnames])
                count += 1
        logger.debug(f"[CsvRepository] Wrote {count} rows to {path}")
        return path

    def append_comment(self, name: str, line: str) -> None:
        with (self.base_dir / name).open("a", encoding="utf-8") as handle:
            handle.write(f"# {line}\n")

    def read(self, name: str) -> list[dict[str, str]]:
        """Read the rows back as strings, skipping comment lines."""
        with (self.base_dir / name).open(newline="", encoding="utf-8") as handle:
            lines = [line for line in handle if not line.startswith("#")]
        return list(csv.DictReader(lines))

    def comments(self, name: str) -> list[str]:
        with (self.base_dir / name).open(encoding="utf-8") as handle:
            return [line[2:].rstrip("\n") for line in handle if line.startswith("# ")]


TRAJECTORY_FIELDS = ("x", "logR", "theta")
SOLUTION_FIELDS = ("x", "u", "du")
SCAN_FIELDS = ("eta", "growth_stat", "divergent_j_flags", "bound_value", "flagged")
DIMENSION_FIELDS = ("scale", "count")
BOUND_FIELDS = ("eta", "j_or_J", "K", "value", "finite_flag", "terms_used")
IDENTITY_FIELDS = ("identity", "J", "K", "k", "trials", "max_discrepancy", "passed", "witness")
DISCRETE_FIELDS = ("n", "log_r", "theta")
CHECK_FIELDS = ("check", "case", "lhs", "rhs", "holds")
