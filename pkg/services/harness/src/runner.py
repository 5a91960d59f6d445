"""Seeded experiment runner with bounded concurrency.

Per trial a target tuple with dim1 rows is drawn and its sum of squares is
normalized to unit norm. For each k an independent start tuple of unit
Frobenius norm is minimized and classified. Every draw gets its own seed
from :func:`derive_seed`, so results do not depend on scheduling.
"""

import asyncio
import logging
import time

import numpy as np
import pandas as pd

from services.algebra.src import CoordinateRing, build_ring, random_linear_tuple
from services.harness.src.models import ExperimentConfig, ResultRow, ResultsTable, TrialOutcome
from services.shared.errors import ConfigError
from services.solver.src import RunStatus, minimize
from services.sosmap.src import ObjectiveContext, sigma

logger = logging.getLogger(__name__)

_CONVERGED = [RunStatus.SUCCESSFUL.value, RunStatus.SPURIOUS.value]


def derive_seed(seed: int, trial: int, slot: int) -> int:
    """Independent sub-seed for a draw; slot 0 is the target, slot j + 1 the j-th k value."""
    return int(np.random.SeedSequence([seed, trial, slot]).generate_state(1)[0])


def draw_target(ring: CoordinateRing, seed: int, trial: int) -> np.ndarray:
    """Unit-norm sum of squares of a random tuple with dim1 rows."""
    f = sigma(ring, random_linear_tuple(ring, ring.dim1, derive_seed(seed, trial, 0)))
    return f / np.linalg.norm(f)


def draw_start(ring: CoordinateRing, k: int, seed: int, trial: int, slot: int) -> np.ndarray:
    """Random k-tuple of unit Frobenius norm."""
    l = random_linear_tuple(ring, k, derive_seed(seed, trial, slot))
    return l / np.linalg.norm(l)


class ExperimentRunner:
    """Runs every (trial, k) solve of an experiment on a shared ring."""

    def __init__(self, cfg: ExperimentConfig, ring: CoordinateRing | None = None):
        """Initialize the runner.

        Args:
            cfg: Experiment configuration
            ring: Prebuilt ring for cfg.variety; built here when omitted
        """
        self.cfg = cfg
        self.ring = ring or build_ring(cfg.variety)
        self.label = cfg.variety.label
        self.solver = cfg.solver.with_auto_evals(self.ring.dim1)
        self.semaphore = asyncio.Semaphore(cfg.workers)

    def solve(self, trial: int, slot: int, k: int) -> TrialOutcome:
        """Draw target and start for one solve and run it synchronously."""
        target = draw_target(self.ring, self.cfg.seed, trial)
        l0 = draw_start(self.ring, k, self.cfg.seed, trial, slot)
        record = minimize(ObjectiveContext(ring=self.ring, target=target, k=k), l0, self.solver)
        if record.error:
            logger.warning(f"[{self.label} k={k} trial={trial}] solver error: {record.error}")
        return TrialOutcome(
            variety=self.label,
            k=k,
            trial=trial,
            status=record.status,
            final_distance=record.final_distance,
            wall_time=record.wall_time,
            evals=record.evals,
            error=record.error,
        )

    async def run_solve(self, trial: int, slot: int, k: int) -> TrialOutcome:
        async with self.semaphore:
            outcome = await asyncio.to_thread(self.solve, trial, slot, k)
        logger.debug(
            f"[{outcome.status.value.upper()}] {self.label} k={k} trial={trial} "
            f"distance={outcome.final_distance:.3e} in {outcome.wall_time:.2f}s"
        )
        return outcome

    async def run_all(self) -> list[TrialOutcome]:
        """Run every solve with bounded concurrency."""
        tasks = [
            self.run_solve(trial, j + 1, k)
            for trial in range(self.cfg.trials)
            for j, k in enumerate(self.cfg.k_values)
        ]
        return list(await asyncio.gather(*tasks))


def aggregate(cfg: ExperimentConfig, outcomes: list[TrialOutcome]) -> ResultsTable:
    """Count statuses and time converged runs per k, in the order of cfg.k_values."""
    frame = pd.DataFrame([o.model_dump(mode="json") for o in outcomes])
    rows = []
    for k in cfg.k_values:
        group = frame[frame["k"] == k] if not frame.empty else frame
        counts = group["status"].value_counts() if not group.empty else pd.Series(dtype=int)
        times = group.loc[group["status"].isin(_CONVERGED), "wall_time"] if not group.empty else pd.Series()
        rows.append(
            ResultRow(
                variety=cfg.variety.label,
                k=k,
                trials=len(group),
                successful=int(counts.get(RunStatus.SUCCESSFUL.value, 0)),
                unfinished=int(counts.get(RunStatus.UNFINISHED.value, 0)),
                spurious=int(counts.get(RunStatus.SPURIOUS.value, 0)),
                mean_time_s=float(times.mean()) if len(times) else None,
                median_time_s=float(times.median()) if len(times) else None,
            )
        )
    return ResultsTable(rows=rows, outcomes=outcomes)


async def run_experiment_async(cfg: ExperimentConfig) -> ResultsTable:
    """Run an experiment on the current event loop."""
    if not cfg.k_values or cfg.trials < 1:
        raise ConfigError("an experiment needs at least one k value and one trial")
    ring = build_ring(cfg.variety)
    runner = ExperimentRunner(cfg, ring)
    logger.info(
        f"Starting experiment on {runner.label}: k={cfg.k_values} trials={cfg.trials} "
        f"seed={cfg.seed} workers={cfg.workers} max_evals={runner.solver.max_evals}"
    )
    start = time.perf_counter()
    outcomes = await runner.run_all()
    table = aggregate(cfg, outcomes)
    summary = ", ".join(f"k={r.k}: {r.successful}/{r.unfinished}/{r.spurious}" for r in table.rows)
    logger.info(f"Finished experiment on {runner.label} in {time.perf_counter() - start:.1f}s ({summary})")
    return table


def run_experiment(cfg: ExperimentConfig) -> ResultsTable:
    """Run every trial of an experiment and aggregate the outcomes.

    Args:
        cfg: Experiment configuration

    Returns:
        One row per k with successful/unfinished/spurious counts

    Raises:
        ConfigError: If the configuration has no k values or trials
    """
    return asyncio.run(run_experiment_async(cfg))
