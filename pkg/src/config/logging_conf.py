"""
Logging configuration for the workbench using loguru.

Every record carries the running subcommand in ``extra["command"]`` ("-"
outside a command). Besides the console and the rotating file under
settings.LOG_DIR, each command run copies its records into ``run.log`` in
its output directory.
"""

import sys
from contextlib import contextmanager
from pathlib import Path
from typing import Iterator, Optional

from loguru import logger

from src.config.settings import settings

RUN_LOG_NAME = "run.log"
LOG_LEVEL = "DEBUG" if settings.DEBUG else "INFO"

logger.remove()
logger.configure(extra={"command": "-"})

logger.add(
    sys.stderr,
    format=settings.LOG_FORMAT,
    level=LOG_LEVEL,
    colorize=True,
    backtrace=settings.DEBUG,
    diagnose=settings.DEBUG,
)

if not settings.ENVIRONMENT == "TEST":
    logger.add(
        settings.LOG_FILE,
        format=settings.LOG_FORMAT,
        level=LOG_LEVEL,
        rotation="10 MB",
        retention="1 month",
        compression="zip",
        backtrace=settings.DEBUG,
        diagnose=settings.DEBUG,
    )


def get_logger(name: Optional[str] = None):
    """
    Get a logger bound to the given name.

    Args:
        name: The name of the logger. If None, the calling module's name is used.

    Returns:
        A loguru logger with ``name`` in its extra context.
    """
    if name is None:
        import inspect

        frame = inspect.currentframe().f_back  # type: ignore[union-attr]
        name = frame.f_globals["__name__"]  # type: ignore[union-attr]

    return logger.bind(name=name)


@contextmanager
def command_context(command: str, out_dir: Optional[Path] = None) -> Iterator[None]:
    """
    Tag records with ``command`` and, if ``out_dir`` is given, mirror them into out_dir/run.log.

    Worker threads do not inherit the tag; their records still reach run.log.
    """
    sink_id = None
    if out_dir is not None:
        sink_id = logger.add(
            Path(out_dir) / RUN_LOG_NAME,
            format=settings.LOG_FORMAT,
            level=LOG_LEVEL,
            colorize=False,
            mode="w",
        )
    try:
        with logger.contextualize(command=command):
            yield
    finally:
        if sink_id is not None:
            logger.remove(sink_id)
