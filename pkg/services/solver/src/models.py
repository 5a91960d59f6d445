"""Run records and their classification."""

from enum import Enum

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_serializer


class RunStatus(str, Enum):
    """Outcome of one minimization run."""

    SUCCESSFUL = "successful"
    UNFINISHED = "unfinished"
    SPURIOUS = "spurious"


class StopReason(str, Enum):
    """Why the solver loop ended."""

    DISTANCE = "distance"
    GRADIENT = "gradient"
    FTOL = "ftol"
    MAX_EVALS = "max_evals"
    TIME_LIMIT = "time_limit"
    LINE_SEARCH = "line_search"
    NON_FINITE = "non_finite"


class RunRecord(BaseModel):
    """Result of a single minimize call."""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    final_tuple: np.ndarray = Field(..., description="Final k x dim1 tuple")
    final_distance: float = Field(..., ge=0, description="||sigma_k(l) - target||")
    status: RunStatus = Field(..., description="Successful, spurious or unfinished")
    evals: int = Field(..., ge=0, description="Objective-plus-gradient evaluations")
    wall_time: float = Field(..., ge=0, description="Seconds spent in the solver")
    converged: bool = Field(default=False, description="A convergence test fired")
    iterations: int = Field(default=0, ge=0, description="Accepted steps")
    objective_history: list[float] = Field(default_factory=list, description="Accepted objective values")
    stop_reason: StopReason = Field(..., description="Termination cause")
    error: str | None = Field(default=None, description="Diagnostic for failed runs")

    @field_serializer("final_tuple")
    def serialize_tuple(self, value: np.ndarray) -> list[list[float]]:
        return value.tolist()
