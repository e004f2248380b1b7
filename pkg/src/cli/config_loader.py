"""
Loading and validation of experiment configuration files.
"""

import tomllib
from pathlib import Path
from typing import Any, Optional

from pydantic import ValidationError

from src.config.logging_conf import get_logger
from src.schemas.config import ExperimentConfig
from src.utils.errors import ConfigError

logger = get_logger(__name__)


ENVELOPE_TAGS = {"power-decay", "exponential", "step-train", "zero"}


def _dotted(loc: tuple[Any, ...]) -> str:
    # discriminated unions insert the tag as a path element
    return ".".join(str(part) for part in loc if part not in ENVELOPE_TAGS)


def load_config(path: Path, seed: Optional[int] = None) -> ExperimentConfig:
    """
    Read and validate a TOML experiment file.

    Args:
        path: The configuration file.
        seed: Overrides the file's seed when given.

    Returns:
        ExperimentConfig with defaults filled in.

    Raises:
        ConfigError: If the file is missing, does not parse or does not validate;
            ``key`` names the offending dotted key when known.
    """
    path = Path(path)
    try:
        with path.open("rb") as handle:
            raw = tomllib.load(handle)
    except FileNotFoundError as e:
        raise ConfigError(f"config file not found: {path}") from e
    except tomllib.TOMLDecodeError as e:
        logger.error(f"[ConfigLoader] Cannot parse {path}: {e}")
        raise ConfigError(f"cannot parse {path}: {e}") from e

    if seed is not None:
        raw["seed"] = seed
    try:
        config = ExperimentConfig.model_validate(raw)
    except ValidationError as e:
        error = e.errors()[0]
        key = _dotted(error["loc"])
        logger.error(f"[ConfigLoader] Invalid config {path}: {key}: {error['msg']}")
        raise ConfigError(f"invalid value for '{key}': {error['msg']}", key=key) from e

    logger.debug(f"[ConfigLoader] Loaded {path}")
    return config
