"""Immutable solver configuration."""

from pydantic import BaseModel, ConfigDict, Field

from services.shared.config import SolverSettings, get_settings


class SolverConfig(BaseModel):
    """LBFGS parameters and run-classification thresholds.

    ``max_evals`` of None means 20 * dim1 and is resolved by
    :meth:`with_auto_evals`; 0 disables the cap. ``time_limit`` of 0
    disables the wall-clock cap.
    """

    model_config = ConfigDict(frozen=True)

    memory: int = Field(default=10, ge=1, description="LBFGS history pairs")
    grad_tol: float = Field(default=1e-10, gt=0, description="Gradient tolerance relative to max(1, ||l||)")
    ftol_rel: float = Field(default=1e-12, gt=0, description="Relative objective decrease tolerance")
    max_evals: int | None = Field(default=None, ge=0, description="Objective-plus-gradient evaluation cap")
    time_limit: float = Field(default=600.0, ge=0, description="Wall-clock limit in seconds")
    success_eps: float = Field(default=1e-8, gt=0, description="Distance threshold for success")
    c1: float = Field(default=1e-4, gt=0, lt=1, description="Sufficient-decrease constant")
    c2: float = Field(default=0.9, gt=0, lt=1, description="Curvature constant")
    max_line_search: int = Field(default=25, ge=1, description="Trial steps per line search")
    max_step_halvings: int = Field(default=50, ge=0, description="Halvings on non-finite trial values")

    @classmethod
    def from_settings(cls, settings: SolverSettings | None = None, **overrides: object) -> "SolverConfig":
        """Build a config from environment settings, with explicit overrides.

        Args:
            settings: Solver settings; defaults to the cached application settings
            **overrides: Field values that take precedence (None values are ignored)

        Returns:
            Frozen solver configuration
        """
        settings = settings or get_settings().solver
        data = settings.model_dump()
        data.update({key: value for key, value in overrides.items() if value is not None})
        return cls(**data)

    def with_auto_evals(self, dim1: int) -> "SolverConfig":
        """Resolve an unset evaluation cap to 20 * dim1."""
        if self.max_evals is not None:
            return self
        return self.model_copy(update={"max_evals": 20 * dim1})
