"""
Energy scan with box-counting estimate of the flagged set.
"""

from pathlib import Path

from src.cli.utils.logging_decorator import log_command_call
from src.models.reports import ScanPoint
from src.repositories.csv_repository import DIMENSION_FIELDS, SCAN_FIELDS, CsvRepository
from src.schemas.config import ExperimentConfig
from src.services.potential_service import potential_from_spec
from src.services.prufer_service import PruferService
from src.services.scan_service import ScanService, box_counting_from_mask


@log_command_call
def run_scan(cfg: ExperimentConfig, out_dir: Path) -> int:
    params = cfg.scan
    pot = potential_from_spec(cfg.potential)
    service = ScanService(PruferService(tol=params.tol))
    report = service.scan_energies(
        pot,
        params.eta_min,
        params.eta_max,
        params.n_grid,
        params.x_max,
        growth_threshold=params.growth_threshold,
        cap=params.cap,
        tol=params.tol,
        measure_growth=params.measure_growth,
    )
    CsvRepository[ScanPoint](out_dir, SCAN_FIELDS).write(
        "scan.csv", report.points, header_lines=report.header_lines()
    )

    estimate = box_counting_from_mask(
        report.grid, [point.flagged for point in report.points], params.scales()
    )
    dimension_repo = CsvRepository[tuple](out_dir, DIMENSION_FIELDS)
    dimension_repo.write(
        "dimension.csv",
        zip(estimate.scales, estimate.counts),
        header_lines=["box-counting (upper Minkowski) proxy for the Hausdorff dimension"],
    )
    dimension_repo.append_comment("dimension.csv", estimate.summary())
    return 0
