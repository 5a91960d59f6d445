"""Tests for the LBFGS solver, its line search and run classification."""

import math

import numpy as np
import pytest

from services.algebra.src import build_ring, random_linear_tuple
from services.shared.config import SolverSettings
from services.shared.errors import LineSearchFailure
from services.shared.models import ScrollSpec, VeroneseSpec
from services.solver.src import (
    RunRecord,
    RunStatus,
    SolverConfig,
    StopReason,
    classify,
    cubic_interpolate,
    minimize,
    strong_wolfe,
)
from services.solver.src.line_search import LineSearchResult
from services.sosmap.src import ObjectiveContext, objective, sigma


@pytest.fixture(scope="module")
def scroll_5_10():
    """Coordinate ring of the (5,10) scroll."""
    return build_ring(ScrollSpec(heights=[5, 10]))


@pytest.fixture(scope="module")
def binary_quadratics():
    """Veronese embedding of the projective line in degree 1 (binary forms)."""
    return build_ring(VeroneseSpec(m=1, d=1))


def unit_target(ring, k: int, seed: int) -> np.ndarray:
    """sigma of a random tuple, scaled to unit norm."""
    f = sigma(ring, random_linear_tuple(ring, k, seed))
    return f / np.linalg.norm(f)


def unit_start(ring, k: int, seed: int) -> np.ndarray:
    """Random tuple with unit Frobenius norm."""
    l = random_linear_tuple(ring, k, seed)
    return l / np.linalg.norm(l)


def record(distance: float, converged: bool) -> RunRecord:
    """Minimal run record for classification tests."""
    return RunRecord(
        final_tuple=np.zeros((1, 2)),
        final_distance=distance,
        status=RunStatus.UNFINISHED,
        evals=1,
        wall_time=0.0,
        converged=converged,
        stop_reason=StopReason.FTOL if converged else StopReason.MAX_EVALS,
    )


class TestClassify:
    """Tests for run classification."""

    def test_success_wins(self):
        """Test a small distance is successful whether or not the run converged."""
        cfg = SolverConfig(success_eps=1e-8)
        assert classify(record(1e-9, True), cfg) == RunStatus.SUCCESSFUL
        assert classify(record(1e-9, False), cfg) == RunStatus.SUCCESSFUL

    def test_spurious_and_unfinished(self):
        """Test converged runs far from the target are spurious, the rest unfinished."""
        cfg = SolverConfig(success_eps=1e-8)
        assert classify(record(0.3, True), cfg) == RunStatus.SPURIOUS
        assert classify(record(0.3, False), cfg) == RunStatus.UNFINISHED
        assert classify(record(math.inf, False), cfg) == RunStatus.UNFINISHED


class TestLineSearch:
    """Tests for cubic interpolation and the strong-Wolfe search."""

    def test_cubic_interpolate_quadratic(self):
        """Test the minimizer of (x - 1)^2 from values and slopes at 0 and 3."""
        assert cubic_interpolate(0.0, 1.0, -2.0, 3.0, 4.0, 4.0) == pytest.approx(1.0)

    def test_cubic_interpolate_clamps(self):
        """Test the minimizer is clamped to the given bounds."""
        assert cubic_interpolate(0.0, 1.0, -2.0, 3.0, 4.0, 4.0, bounds=(2.0, 3.0)) == pytest.approx(2.0)
        assert cubic_interpolate(1.0, 0.0, 0.0, 1.0, 0.0, 0.0, bounds=(0.0, 4.0)) == pytest.approx(2.0)

    def test_exact_step_on_quadratic(self):
        """Test a unit step is accepted when it hits the minimizer."""

        def evaluate(v):
            return float(np.sum((v - 1.0) ** 2)), 2.0 * (v - 1.0)

        x = np.zeros(2)
        f, g = evaluate(x)
        d = -g / 2.0
        result = strong_wolfe(evaluate, x, 1.0, d, f, g, float(g @ d))
        assert result.step == pytest.approx(1.0)
        assert result.value == pytest.approx(0.0)

    def test_halves_on_non_finite_values(self):
        """Test trial steps landing where the objective is not finite are halved."""

        def evaluate(v):
            if v[0] > 1.5:
                return math.inf, np.full_like(v, math.nan)
            return float(np.sum((v - 1.0) ** 2)), 2.0 * (v - 1.0)

        x = np.zeros(1)
        f, g = evaluate(x)
        d = np.ones(1)
        result = strong_wolfe(evaluate, x, 4.0, d, f, g, float(g @ d))
        assert math.isfinite(result.value)
        assert result.value < f

    def test_fails_when_never_finite(self):
        """Test LineSearchFailure once the halving budget is spent."""

        def evaluate(v):
            return math.inf, np.full_like(v, math.nan)

        x = np.zeros(1)
        with pytest.raises(LineSearchFailure):
            strong_wolfe(evaluate, x, 1.0, np.ones(1), 1.0, -np.ones(1), -1.0, max_halvings=3)

    def test_tiny_direction_still_zooms(self):
        """Test an overshooting step along a very short direction is refined, not dropped."""

        def evaluate(v):
            return float(np.sum((v - 1e-10) ** 2)), 2.0 * (v - 1e-10)

        x = np.zeros(1)
        f, g = evaluate(x)
        d = -g
        result = strong_wolfe(evaluate, x, 4.0, d, f, g, float(g @ d))
        assert result.step > 0.0
        assert result.value < f

    def test_respects_budget(self):
        """Test the search stops at its evaluation budget and keeps the best point."""
        calls = []

        def evaluate(v):
            calls.append(v)
            return float(np.sum((v - 1.0) ** 2)), 2.0 * (v - 1.0)

        x = np.zeros(1)
        f, g = evaluate(x)
        d = -g
        result = strong_wolfe(evaluate, x, 1e-6, d, f, g, float(g @ d), budget=3)
        assert result.evals == 3
        assert len(calls) == 4
        assert result.value < f


class TestMinimize:
    """Tests for the LBFGS driver."""

    def test_scroll_runs_reach_the_target(self, scroll_5_10):
        """Test most runs with k = m + 1 on the (5,10) scroll are successful."""
        cfg = SolverConfig(max_evals=0, time_limit=60.0)
        statuses = []
        for trial in range(5):
            ctx = ObjectiveContext(ring=scroll_5_10, target=unit_target(scroll_5_10, 3, trial), k=3)
            statuses.append(minimize(ctx, unit_start(scroll_5_10, 3, 1000 + trial), cfg).status)
        assert statuses.count(RunStatus.SUCCESSFUL) >= 4

    def test_start_at_minimizer(self, scroll_5_10):
        """Test a start with zero residual returns immediately."""
        l0 = unit_start(scroll_5_10, 3, 1)
        ctx = ObjectiveContext(ring=scroll_5_10, target=sigma(scroll_5_10, l0), k=3)
        result = minimize(ctx, l0, SolverConfig())
        assert result.status == RunStatus.SUCCESSFUL
        assert result.stop_reason == StopReason.DISTANCE
        assert result.iterations == 0
        assert result.evals == 1
        np.testing.assert_array_equal(result.final_tuple, l0)

    def test_history_is_monotone(self, scroll_5_10):
        """Test accepted objective values never increase."""
        ctx = ObjectiveContext(ring=scroll_5_10, target=unit_target(scroll_5_10, 4, 2), k=3)
        result = minimize(ctx, unit_start(scroll_5_10, 3, 3), SolverConfig(max_evals=200))
        assert len(result.objective_history) == result.iterations + 1
        assert np.all(np.diff(result.objective_history) <= 0.0)
        assert result.final_distance**2 == pytest.approx(result.objective_history[-1])

    def test_deterministic(self, scroll_5_10):
        """Test identical inputs give identical runs."""
        ctx = ObjectiveContext(ring=scroll_5_10, target=unit_target(scroll_5_10, 3, 4), k=3)
        l0 = unit_start(scroll_5_10, 3, 5)
        first = minimize(ctx, l0, SolverConfig(max_evals=100))
        second = minimize(ctx, l0, SolverConfig(max_evals=100))
        np.testing.assert_array_equal(first.final_tuple, second.final_tuple)
        assert first.evals == second.evals
        assert first.objective_history == second.objective_history

    def test_evaluation_cap(self, scroll_5_10):
        """Test the run stops unfinished at the evaluation cap."""
        ctx = ObjectiveContext(ring=scroll_5_10, target=unit_target(scroll_5_10, 3, 6), k=3)
        result = minimize(ctx, unit_start(scroll_5_10, 3, 7), SolverConfig(max_evals=5))
        assert result.stop_reason == StopReason.MAX_EVALS
        assert result.status == RunStatus.UNFINISHED
        assert result.evals == 5
        assert not result.converged

    def test_stalled_line_search_is_unfinished(self, scroll_5_10, monkeypatch):
        """Test a line search that returns step 0 ends the run unfinished, not converged."""

        def stalled(evaluate, x, t, d, f, g, gtd, **kwargs):
            return LineSearchResult(step=0.0, value=f, grad=g, evals=0)

        monkeypatch.setattr("services.solver.src.lbfgs.strong_wolfe", stalled)
        ctx = ObjectiveContext(ring=scroll_5_10, target=unit_target(scroll_5_10, 3, 12), k=3)
        result = minimize(ctx, unit_start(scroll_5_10, 3, 13), SolverConfig(max_evals=0))
        assert result.stop_reason == StopReason.LINE_SEARCH
        assert result.status == RunStatus.UNFINISHED
        assert not result.converged
        assert result.error is not None
        assert result.iterations == 0

    def test_scale_sanity(self):
        """Test scaling the target by c^2 and the start by c gives the same statuses."""
        ring = build_ring(ScrollSpec(heights=[2, 3]))
        cfg = SolverConfig(max_evals=0, time_limit=60.0)
        for trial in range(3):
            target = unit_target(ring, 3, 30 + trial)
            l0 = unit_start(ring, 3, 40 + trial)
            base = minimize(ObjectiveContext(ring=ring, target=target, k=3), l0, cfg)
            scaled = minimize(ObjectiveContext(ring=ring, target=4.0 * target, k=3), 2.0 * l0, cfg)
            assert base.status == scaled.status

    def test_final_distance_matches_tuple(self, scroll_5_10):
        """Test the reported distance is the distance of the returned tuple."""
        ctx = ObjectiveContext(ring=scroll_5_10, target=unit_target(scroll_5_10, 3, 8), k=3)
        result = minimize(ctx, unit_start(scroll_5_10, 3, 9), SolverConfig(max_evals=50))
        assert result.final_distance == pytest.approx(math.sqrt(objective(ctx, result.final_tuple)))

    def test_single_square_matches_grid(self, binary_quadratics):
        """Test the best of several runs with one square matches a grid search."""
        target = np.random.default_rng(21).standard_normal(3)
        target /= np.linalg.norm(target)
        ctx = ObjectiveContext(ring=binary_quadratics, target=target, k=1)

        a0, a1 = np.meshgrid(np.linspace(-2, 2, 401), np.linspace(-2, 2, 401))
        grid = (a0**2 - target[0]) ** 2 + (2 * a0 * a1 - target[1]) ** 2 + (a1**2 - target[2]) ** 2
        grid_min = float(grid.min())

        best = min(
            minimize(ctx, random_linear_tuple(binary_quadratics, 1, seed), SolverConfig(max_evals=0)).final_distance ** 2
            for seed in range(10)
        )
        assert best <= grid_min + 1e-9
        assert grid_min - best < 1e-2


class TestSolverConfig:
    """Tests for building solver configurations."""

    def test_from_settings_with_overrides(self):
        """Test explicit overrides win and None overrides are ignored."""
        cfg = SolverConfig.from_settings(SolverSettings(memory=5, time_limit=30.0), time_limit=None, success_eps=1e-6)
        assert cfg.memory == 5
        assert cfg.time_limit == 30.0
        assert cfg.success_eps == 1e-6

    def test_auto_evals(self):
        """Test the unset evaluation cap resolves to 20 * dim1 and 0 stays disabled."""
        assert SolverConfig().with_auto_evals(17).max_evals == 340
        assert SolverConfig(max_evals=0).with_auto_evals(17).max_evals == 0
        assert SolverConfig(max_evals=9).with_auto_evals(17).max_evals == 9

    def test_frozen(self):
        """Test configurations cannot be mutated."""
        cfg = SolverConfig()
        with pytest.raises(ValueError):
            cfg.memory = 3
