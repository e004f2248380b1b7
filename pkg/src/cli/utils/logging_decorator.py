import functools
from typing import Any, Callable

from src.config.logging_conf import command_context, get_logger


def log_command_call(func: Callable[..., int]) -> Callable[..., int]:
    """
    Decorator to log when a command starts and when it finishes.
    Logs command name, output directory, exit code and exceptions, all
    tagged with the command name and mirrored into the output directory.
    """
    logger = get_logger(func.__module__)

    @functools.wraps(func)
    def wrapper(*args: Any, **kwargs: Any) -> int:
        command_name = func.__name__.removeprefix("run_")
        out_dir = kwargs.get("out_dir", args[1] if len(args) > 1 else None)
        with command_context(command_name, out_dir):
            logger.info(f"[Command] '{command_name}' started, output in {out_dir}")
            try:
                code = func(*args, **kwargs)
                logger.info(f"[Command] '{command_name}' finished with exit code {code}")
                return code
            except Exception as e:
                logger.exception(f"[Command] '{command_name}' error: {e}")
                raise

    return wrapper
