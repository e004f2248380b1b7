"""
Command-line entry point for the workbench.

Every subcommand takes a TOML experiment file, an optional output directory
and an optional seed override.
"""

import sys
from pathlib import Path
from typing import Any, Callable, Optional

import click

from src.cli.config_loader import load_config
from src.cli.runner import EXIT_USAGE, run_command
from src.config.logging_conf import get_logger
from src.utils.errors import ConfigError

logger = get_logger(__name__)


def experiment_options(func: Callable[..., Any]) -> Callable[..., Any]:
    func = click.option("--seed", type=int, default=None, help="Overrides the config seed.")(func)
    func = click.option(
        "--out",
        "out_dir",
        type=click.Path(file_okay=False, path_type=Path),
        default=None,
        help="Output directory; overrides out_dir in the config.",
    )(func)
    return click.argument("config_path", type=click.Path(dir_okay=False, path_type=Path))(func)


def _run(name: str, config_path: Path, out_dir: Optional[Path], seed: Optional[int]) -> None:
    try:
        cfg = load_config(config_path, seed=seed)
    except ConfigError as e:
        click.echo(f"Error: {e}", err=True)
        sys.exit(EXIT_USAGE)
    sys.exit(run_command(name, cfg, out_dir))


@click.group()
def cli() -> None:
    """Prüfer variables, small divisors and boundedness estimates."""


@cli.command()
@experiment_options
def verify(config_path: Path, out_dir: Optional[Path], seed: Optional[int]) -> None:
    """Verify the divisor identities exactly at random rational points."""
    _run("verify", config_path, out_dir, seed)


@cli.command()
@experiment_options
def simulate(config_path: Path, out_dir: Optional[Path], seed: Optional[int]) -> None:
    """Integrate Prüfer trajectories and compare with the Schrödinger oracle."""
    _run("simulate", config_path, out_dir, seed)


@cli.command()
@experiment_options
def scan(config_path: Path, out_dir: Optional[Path], seed: Optional[int]) -> None:
    """Scan an energy grid and estimate the dimension of the flagged set."""
    _run("scan", config_path, out_dir, seed)


@cli.command()
@experiment_options
def bound(config_path: Path, out_dir: Optional[Path], seed: Optional[int]) -> None:
    """Evaluate small-divisor sums and the boundedness estimate."""
    _run("bound", config_path, out_dir, seed)


@cli.command()
@experiment_options
def discrete(config_path: Path, out_dir: Optional[Path], seed: Optional[int]) -> None:
    """Run discrete Prüfer recursions and the Szegő comparison."""
    _run("discrete", config_path, out_dir, seed)


@cli.command()
@experiment_options
def holder(config_path: Path, out_dir: Optional[Path], seed: Optional[int]) -> None:
    """Check the Hölder integral bounds."""
    _run("holder", config_path, out_dir, seed)


if __name__ == "__main__":
    try:
        cli()
    except Exception as e:
        logger.error(f"Workbench stopped due to error: {e}")
        sys.exit(1)
