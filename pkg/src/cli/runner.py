"""
Programmatic entrypoint shared by the click commands and the tests.
"""

from pathlib import Path
from typing import Callable, Optional

from src.cli.commands.bound import run_bound
from src.cli.commands.discrete import run_discrete
from src.cli.commands.holder import run_holder
from src.cli.commands.scan import run_scan
from src.cli.commands.simulate import run_simulate
from src.cli.commands.verify import run_verify
from src.config.logging_conf import get_logger
from src.config.settings import settings
from src.schemas.config import ExperimentConfig
from src.utils.errors import ConfigError, PotentialValidationError, WorkbenchError

logger = get_logger(__name__)

EXIT_OK = 0
EXIT_CONTRACT = 1
EXIT_USAGE = 2

COMMANDS: dict[str, Callable[[ExperimentConfig, Path], int]] = {
    "verify": run_verify,
    "simulate": run_simulate,
    "scan": run_scan,
    "bound": run_bound,
    "discrete": run_discrete,
    "holder": run_holder,
}


def resolve_out_dir(cfg: ExperimentConfig, out_dir: Optional[Path] = None) -> Path:
    return Path(out_dir or cfg.out_dir or settings.OUTPUT_DIR)


def run_command(cmd: str, cfg: ExperimentConfig, out_dir: Optional[Path] = None) -> int:
    """
    Run one subcommand.

    Returns:
        0 on success, 1 if a checked contract fails, 2 on an unknown
        command, an invalid configuration or a computation that aborted.
    """
    command = COMMANDS.get(cmd)
    if command is None:
        logger.error(f"[Command] Unknown command {cmd!r}; expected one of {sorted(COMMANDS)}")
        return EXIT_USAGE
    target = resolve_out_dir(cfg, out_dir)
    try:
        return command(cfg, target)
    except (ConfigError, PotentialValidationError) as e:
        logger.error(f"[Command] '{cmd}' rejected its input: {e}")
        return EXIT_USAGE
    except WorkbenchError as e:
        logger.error(f"[Command] '{cmd}' aborted: {e}")
        return EXIT_USAGE
