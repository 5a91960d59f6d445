"""Environment-driven settings for the toolkit.

Settings hierarchy (lowest to highest priority):
    1. Default values in the Pydantic models
    2. .env file (if it exists in the working directory)
    3. Environment variables (``SOS_`` prefix, ``__`` for nesting)
"""

from functools import lru_cache
from pathlib import Path

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict

from services.shared.config.base_settings import LogLevel


class SolverSettings(BaseSettings):
    """LBFGS defaults and the run-classification thresholds.

    Attributes:
        memory: Number of stored curvature pairs
        grad_tol: Gradient-norm tolerance, relative to max(1, ||l||)
        ftol_rel: Relative objective decrease regarded as convergence
        max_evals: Evaluation cap; None means 20 * dim1
        time_limit: Wall-clock limit per solve in seconds (0 disables it)
        success_eps: Distance threshold for a successful run
        c1: Sufficient-decrease constant of the line search
        c2: Curvature constant of the line search
        max_line_search: Maximum trial steps per line search
        max_step_halvings: Halvings allowed when a trial value is not finite
    """

    memory: int = Field(default=10, ge=1, description="LBFGS history pairs")
    grad_tol: float = Field(default=1e-10, gt=0, description="Gradient tolerance")
    ftol_rel: float = Field(default=1e-12, gt=0, description="Relative objective decrease tolerance")
    max_evals: int | None = Field(default=None, ge=0, description="Evaluation cap (None = 20 * dim1, 0 = none)")
    time_limit: float = Field(default=600.0, ge=0, description="Time limit in seconds (0 = none)")
    success_eps: float = Field(default=1e-8, gt=0, description="Distance threshold for success")
    c1: float = Field(default=1e-4, gt=0, lt=1, description="Armijo constant")
    c2: float = Field(default=0.9, gt=0, lt=1, description="Curvature constant")
    max_line_search: int = Field(default=25, ge=1, description="Line-search trial cap")
    max_step_halvings: int = Field(default=50, ge=0, description="Halvings on non-finite values")

    model_config = SettingsConfigDict(env_prefix="SOS_SOLVER_", case_sensitive=False, extra="ignore")


class AppSettings(BaseSettings):
    """Application-wide configuration settings.

    Attributes:
        log: Logging level (the ``SOS_LOG`` variable)
        workers: Concurrent trials in the experiment runner
        dense_hessian_limit: Largest k * dim1 for which the Hessian is materialized
        rank_tol: Relative singular-value cutoff for rank decisions
        solver: Solver defaults
    """

    log: LogLevel = Field(default=LogLevel.INFO, description="Logging level")
    workers: int = Field(default=1, ge=1, description="Concurrent experiment trials")
    dense_hessian_limit: int = Field(default=2000, ge=1, description="Dense Hessian size limit")
    rank_tol: float = Field(default=1e-10, gt=0, description="Relative rank cutoff")
    solver: SolverSettings = Field(default_factory=SolverSettings)

    model_config = SettingsConfigDict(
        env_prefix="SOS_", env_file_encoding="utf-8", env_nested_delimiter="__", case_sensitive=False, extra="ignore"
    )


@lru_cache
def get_settings() -> AppSettings:
    """Get the cached application settings.

    Returns:
        AppSettings loaded from the environment and an optional ``.env`` file
    """
    env_file = Path(".env")
    if env_file.exists():
        return AppSettings(_env_file=env_file)
    return AppSettings()


def reload_settings() -> AppSettings:
    """Force reload of the settings (useful in tests).

    Returns:
        The newly loaded settings instance
    """
    get_settings.cache_clear()
    return get_settings()
