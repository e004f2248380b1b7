"""
Hölder integral checks for Lebesgue measure on [0, 1].
"""

from pathlib import Path

from src.cli.utils.checks import write_checks
from src.cli.utils.logging_decorator import log_command_call
from src.models.reports import CheckResult
from src.schemas.config import ExperimentConfig
from src.services.scan_service import h_holder_check, holder_check

QUADRATURE_SLACK = 1e-6


@log_command_call
def run_holder(cfg: ExperimentConfig, out_dir: Path) -> int:
    params = cfg.holder
    psi_grid = cfg.psi_grid()
    checks: list[CheckResult] = []
    J = len(params.h_phis)
    for alpha in params.alphas:
        best, bound = holder_check(alpha, psi_grid, params.n_quad)
        checks.append(CheckResult("holder", f"alpha={alpha!r}", best, bound, slack=QUADRATURE_SLACK))
        if J and J * alpha < 1:
            value, h_bound = h_holder_check(J, alpha, params.h_phis, params.n_quad)
            checks.append(
                CheckResult("h_holder", f"J={J} alpha={alpha!r}", value, h_bound, slack=QUADRATURE_SLACK)
            )
    return write_checks(out_dir, "holder.csv", checks)
