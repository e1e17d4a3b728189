"""Logging configuration for the DHC classifier."""
import logging
import sys
from typing import Optional, Union

from .errors import ConfigurationError

PACKAGE_LOGGER = "dhc_classifier"


def setup_logging(name: Optional[str] = None, level: int = logging.INFO) -> logging.Logger:
    """Setup logging configuration.

    Args:
        name: Logger name
        level: Logging level

    Returns:
        logging.Logger: Configured logger instance
    """
    logger = logging.getLogger(name or PACKAGE_LOGGER)

    # Handlers live on the package logger only; module loggers propagate to it
    root = logging.getLogger(PACKAGE_LOGGER)
    if not root.handlers:
        # stderr keeps stdout clean for predict output
        handler = logging.StreamHandler(sys.stderr)
        handler.setFormatter(logging.Formatter(
            '%(asctime)s - %(name)s - %(levelname)s - %(message)s'
        ))
        root.addHandler(handler)
        root.setLevel(level)
        root.propagate = False

    return logger


def set_log_level(level: Union[int, str]) -> None:
    """Set the level of the whole package logger tree.

    Args:
        level: Level number or name such as "DEBUG"
    """
    if isinstance(level, str):
        level = logging.getLevelName(level.upper())
        if not isinstance(level, int):
            raise ConfigurationError(f"Unknown log level: {level}")
    root = setup_logging(PACKAGE_LOGGER)
    root.setLevel(level)
    for handler in root.handlers:
        handler.setLevel(level)
