"""Experiment configuration and aggregated results."""

from typing import Any

import pandas as pd
from pydantic import BaseModel, Field, ValidationError, field_validator

from services.shared.errors import ConfigError
from services.shared.models import VarietySpec
from services.solver.src import RunStatus, SolverConfig

RESULT_COLUMNS = [
    "variety",
    "k",
    "trials",
    "successful",
    "unfinished",
    "spurious",
    "mean_time_s",
    "median_time_s",
]


class ExperimentConfig(BaseModel):
    """One experiment: a variety, the numbers of squares and the trial count."""

    variety: VarietySpec = Field(..., description="Variety to sample on")
    k_values: list[int] = Field(..., min_length=1, description="Numbers of squares compared")
    trials: int = Field(default=20, ge=1, description="Trials per k")
    seed: int = Field(default=42, ge=0, description="Root seed")
    solver: SolverConfig = Field(default_factory=SolverConfig.from_settings, description="Solver configuration")
    output_path: str | None = Field(default=None, description="Where results are written")
    workers: int = Field(default=1, ge=1, description="Concurrent solves")

    @field_validator("k_values")
    @classmethod
    def check_k_values(cls, v: list[int]) -> list[int]:
        if any(k < 1 for k in v):
            raise ValueError("every k must be >= 1")
        return v

    @classmethod
    def build(cls, **data: Any) -> "ExperimentConfig":
        """Validate keyword data, converting validation errors to ConfigError."""
        try:
            return cls(**data)
        except ValidationError as e:
            raise ConfigError(f"invalid experiment configuration: {e}") from e


class TrialOutcome(BaseModel):
    """Classified result of one (trial, k) solve."""

    variety: str
    k: int
    trial: int
    status: RunStatus
    final_distance: float
    wall_time: float
    evals: int
    error: str | None = None


class ResultRow(BaseModel):
    """Counts and timings for one (variety, k) pair.

    Times are taken over converged runs (successful or spurious); the
    median is reported next to the mean.
    """

    variety: str
    k: int
    trials: int
    successful: int
    unfinished: int
    spurious: int
    mean_time_s: float | None = None
    median_time_s: float | None = None


class ResultsTable(BaseModel):
    """Aggregated experiment results plus the per-trial outcomes."""

    rows: list[ResultRow] = Field(default_factory=list)
    outcomes: list[TrialOutcome] = Field(default_factory=list)

    def to_frame(self) -> pd.DataFrame:
        """Rows as a DataFrame with the result columns in order."""
        return pd.DataFrame([row.model_dump() for row in self.rows], columns=RESULT_COLUMNS)
