"""Shared configuration utilities."""

from services.shared.config.base_settings import LOG_FORMAT, LogLevel, configure_logging
from services.shared.config.settings import AppSettings, SolverSettings, get_settings, reload_settings

__all__ = [
    "LOG_FORMAT",
    "LogLevel",
    "configure_logging",
    "AppSettings",
    "SolverSettings",
    "get_settings",
    "reload_settings",
]
