"""Base configuration utilities for all modules."""

import logging
from enum import Enum

LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"


class LogLevel(str, Enum):
    """Log level enumeration for consistent logging configuration."""

    DEBUG = "DEBUG"
    INFO = "INFO"
    WARNING = "WARNING"
    ERROR = "ERROR"
    CRITICAL = "CRITICAL"


def configure_logging(level: LogLevel | str = LogLevel.INFO) -> None:
    """Configure root logging once for a command-line entry point.

    Args:
        level: Log level name or LogLevel member

    Returns:
        None
    """
    name = level.value if isinstance(level, LogLevel) else str(level).upper()
    logging.basicConfig(level=getattr(logging, name), format=LOG_FORMAT, force=True)
