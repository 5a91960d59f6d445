"""Experiment protocol: seeded trials, classification counts and result files."""

from services.harness.src.models import (
    RESULT_COLUMNS,
    ExperimentConfig,
    ResultRow,
    ResultsTable,
    TrialOutcome,
)
from services.harness.src.output import OutputFormat, emit_results
from services.harness.src.runner import (
    ExperimentRunner,
    aggregate,
    derive_seed,
    draw_start,
    draw_target,
    run_experiment,
    run_experiment_async,
)

__all__ = [
    "RESULT_COLUMNS",
    "ExperimentConfig",
    "ExperimentRunner",
    "OutputFormat",
    "ResultRow",
    "ResultsTable",
    "TrialOutcome",
    "aggregate",
    "derive_seed",
    "draw_start",
    "draw_target",
    "emit_results",
    "run_experiment",
    "run_experiment_async",
]
