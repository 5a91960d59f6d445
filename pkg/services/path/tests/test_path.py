"""Tests for the restricted path and the feasibility wrapper."""

import math

import numpy as np
import pytest
from pydantic import ValidationError

from services.algebra.src import build_ring, random_linear_tuple
from services.path.src import PathConfig, restricted_path, sos_feasibility_via_path
from services.shared.errors import InfeasibleStart
from services.shared.models import ScrollSpec
from services.solver.src import SolverConfig
from services.sosmap.src import sigma


@pytest.fixture(scope="module")
def scroll22():
    """Coordinate ring of the (2,2) scroll."""
    return build_ring(ScrollSpec(heights=[2, 2]))


@pytest.fixture(scope="module")
def scroll_5_10():
    """Coordinate ring of the (5,10) scroll."""
    return build_ring(ScrollSpec(heights=[5, 10]))


@pytest.fixture
def solver_cfg():
    """Solver configuration with a bounded evaluation budget."""
    return SolverConfig(max_evals=500, time_limit=30.0)


def unit_tuple(ring, k: int, seed: int) -> np.ndarray:
    """Random tuple with unit Frobenius norm."""
    l = random_linear_tuple(ring, k, seed)
    return l / np.linalg.norm(l)


class TestPathConfig:
    """Tests for path configuration validation."""

    def test_defaults(self):
        """Test v runs from 0 to +inf by default."""
        cfg = PathConfig(step_u=0.1)
        assert cfg.v_lower == 0.0
        assert math.isinf(cfg.v_upper)
        assert cfg.max_steps == 10_000

    @pytest.mark.parametrize("data", [{"step_u": 0.0}, {"step_u": 0.1, "v_lower": 2.0, "v_upper": 1.0}])
    def test_invalid(self, data):
        """Test a non-positive step and inverted bounds are rejected."""
        with pytest.raises(ValidationError):
            PathConfig(**data)


class TestRestrictedPath:
    """Tests for the warm-started path."""

    def test_zero_direction_clamps_to_upper(self, scroll22, solver_cfg):
        """Test g = 0 keeps the target fixed and ends at v_upper with l0."""
        l0 = unit_tuple(scroll22, 3, 1)
        f = sigma(scroll22, l0)
        cfg = PathConfig(step_u=0.3, v_upper=1.0, solver=solver_cfg)
        result = restricted_path(scroll22, f, np.zeros(scroll22.dim2), 3, l0, cfg)
        assert result.v_final == 1.0
        assert result.stop_reason == "v_upper"
        assert len(result.steps) == 4
        np.testing.assert_array_equal(result.l_final, l0)

    def test_infeasible_start(self, scroll22, solver_cfg):
        """Test a start tuple that does not represent f - v_lower * g is rejected."""
        l0 = unit_tuple(scroll22, 3, 2)
        f = sigma(scroll22, l0) + 0.5 * np.eye(scroll22.dim2)[0]
        with pytest.raises(InfeasibleStart):
            restricted_path(scroll22, f, np.zeros(scroll22.dim2), 3, l0, PathConfig(step_u=0.1, solver=solver_cfg))

    def test_step_cap(self, scroll22, solver_cfg):
        """Test the loop stops after max_steps solves when v_upper is infinite."""
        l0 = unit_tuple(scroll22, 3, 3)
        cfg = PathConfig(step_u=0.5, solver=solver_cfg, max_steps=3)
        result = restricted_path(scroll22, sigma(scroll22, l0), np.zeros(scroll22.dim2), 3, l0, cfg)
        assert result.stop_reason == "max_steps"
        assert result.v_final == pytest.approx(1.5)

    def test_returned_point_is_feasible(self, scroll22, solver_cfg):
        """Test the returned tuple represents f - v_final * g."""
        l0 = unit_tuple(scroll22, 4, 4)
        f = sigma(scroll22, l0)
        g = f - sigma(scroll22, unit_tuple(scroll22, 4, 5))
        result = restricted_path(scroll22, f, g, 4, l0, PathConfig(step_u=0.25, v_upper=1.0, solver=solver_cfg))
        residual = sigma(scroll22, result.l_final) - (f - result.v_final * g)
        assert np.linalg.norm(residual) <= solver_cfg.success_eps


    def test_warm_start_distance_bound(self, scroll22, solver_cfg):
        """Test each solve starts within success_eps + step_u * ||g|| of its target."""
        l0 = unit_tuple(scroll22, 4, 4)
        f = sigma(scroll22, l0)
        g = f - sigma(scroll22, unit_tuple(scroll22, 4, 5))
        cfg = PathConfig(step_u=0.25, v_upper=1.0, solver=solver_cfg)
        result = restricted_path(scroll22, f, g, 4, l0, cfg)
        bound = solver_cfg.success_eps + cfg.step_u * np.linalg.norm(g)
        assert len(result.steps) >= 1
        for record in result.steps:
            assert math.sqrt(record.objective_history[0]) <= bound + 1e-12

    def test_v_strictly_increases(self, scroll22, solver_cfg):
        """Test the targeted v values increase strictly and never pass v_upper."""
        l0 = unit_tuple(scroll22, 4, 10)
        f = sigma(scroll22, l0)
        g = f - sigma(scroll22, unit_tuple(scroll22, 4, 11))
        result = restricted_path(scroll22, f, g, 4, l0, PathConfig(step_u=0.3, v_upper=1.0, solver=solver_cfg))
        assert len(result.v_values) == len(result.steps)
        assert all(b > a for a, b in zip([0.0, *result.v_values], result.v_values))
        assert result.v_values[-1] <= 1.0
        if result.stop_reason == "v_upper":
            assert result.v_values[-1] == 1.0
            assert result.v_final == 1.0

class TestFeasibilityWrapper:
    """Tests for the sum-of-squares feasibility wrapper."""

    def test_target_is_start(self, scroll22, solver_cfg):
        """Test f_bar = sigma(l0) is certified without any solve."""
        l0 = unit_tuple(scroll22, 3, 6)
        result = sos_feasibility_via_path(scroll22, sigma(scroll22, l0), 3, l0, solver_cfg=solver_cfg)
        assert result.certified
        assert result.v_final == 1.0
        assert result.stop_reason == "zero_direction"
        assert result.steps == []

    def test_negative_target_not_certified(self, scroll22, solver_cfg):
        """Test the negative of a square monomial cannot be reached."""
        l0 = unit_tuple(scroll22, 3, 7)
        f_bar = -np.eye(scroll22.dim2)[0]
        result = sos_feasibility_via_path(scroll22, f_bar, 3, l0, u=0.2, solver_cfg=solver_cfg)
        assert result.certified is False
        assert result.v_final < 1.0
        assert result.stop_reason == "infeasible"
        assert result.final_distance >= 1.0 - 1e-9

    @pytest.mark.slow
    def test_random_sos_on_scroll(self, scroll_5_10):
        """Test a random sum of three squares on the (5,10) scroll is certified."""
        f_bar = sigma(scroll_5_10, unit_tuple(scroll_5_10, 3, 8))
        l0 = unit_tuple(scroll_5_10, 3, 9)
        result = sos_feasibility_via_path(scroll_5_10, f_bar, 3, l0, u=0.05, solver_cfg=SolverConfig(max_evals=0))
        assert result.certified
        assert result.v_final == 1.0
        assert result.final_distance <= 1e-8
