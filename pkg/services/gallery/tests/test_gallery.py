"""Tests for the gallery of spurious stationary points."""

from math import comb

import numpy as np
import pytest

from services.gallery.src import (
    GALLERY,
    descent_curve_value,
    scroll22_example,
    scroll_spurious,
    scroll_spurious_generators,
    verify_instance,
    veronese_quartic_spurious,
    veronese_surface_example,
    veronese_surface_family,
)
from services.shared.errors import InvalidSpec
from services.sosmap.src import ObjectiveContext, gradient, hessian, sigma
from services.stationarity.src import differential_matrix, span_residual, syzygies


@pytest.fixture(scope="module")
def quartic():
    """Veronese quartic instance on projective 4-space."""
    return veronese_quartic_spurious(4)


class TestConstructors:
    """Tests for the shape of each gallery instance."""

    def test_veronese_surface(self):
        """Test the surface example has three forms and the expected labels."""
        instance = veronese_surface_example()
        assert instance.k == 3
        assert instance.ring.dim1 == 6
        assert float(instance.g @ instance.g) == pytest.approx(1.0)

    @pytest.mark.parametrize("b", [-0.1, 0.6])
    def test_surface_family_range(self, b):
        """Test the family parameter must lie in [0, 1/2]."""
        with pytest.raises(InvalidSpec):
            veronese_surface_family(b)

    def test_scroll22(self):
        """Test the (2,2) scroll example carries four generators."""
        instance = scroll22_example()
        assert instance.k == 3
        assert instance.generators.shape == (4, 3, instance.ring.dim1)
        assert instance.expected_quotient_rank == 4

    def test_scroll_spurious_sizes(self):
        """Test k = n - n1 and n1 * sum(n_j) generators for heights (2,3)."""
        instance = scroll_spurious([2, 3])
        n = instance.ring.dim1 - 1
        assert instance.k == n - 2 == 4
        assert instance.generators.shape[0] == 2 * 3
        assert instance.expected_quotient_rank == 6

    def test_scroll_spurious_three_heights(self):
        """Test the generator count for heights (1,2,2)."""
        generators = scroll_spurious_generators([1, 2, 2])
        assert generators.shape[0] == 1 * (2 + 2)

    @pytest.mark.parametrize("heights", [[2], [3, 2]])
    def test_scroll_spurious_invalid(self, heights):
        """Test a single height or unsorted heights are rejected."""
        with pytest.raises(InvalidSpec):
            scroll_spurious(heights)

    def test_veronese_quartic(self, quartic):
        """Test k = 1 + binom(m, 2) forms and <g, w^2> = -1."""
        assert quartic.k == 1 + comb(4, 2)
        ring = quartic.ring
        assert float(quartic.g @ sigma(ring, quartic.witness[None, :])) == pytest.approx(-1.0)
        assert float(quartic.g @ sigma(ring, quartic.l)) == pytest.approx(0.0, abs=1e-12)

    def test_veronese_quartic_invalid(self):
        """Test m must be at least 2."""
        with pytest.raises(InvalidSpec):
            veronese_quartic_spurious(1)

    def test_serializes_to_json(self):
        """Test instances dump their ring as labels and arrays as lists."""
        data = scroll22_example().model_dump(mode="json")
        assert data["ring"]["variety"] == {"family": "scroll", "heights": [2, 2]}
        assert data["ring"]["basis1"][0] == "y0^2*x1"
        assert len(data["l"]) == 3


class TestVerification:
    """Tests for the certificate and structural checks."""

    @pytest.mark.parametrize("name", sorted(GALLERY))
    def test_every_instance_passes(self, name):
        """Test every registered instance verifies."""
        report = verify_instance(GALLERY[name]())
        assert report.passed, report
        if report.expected_quotient_rank is not None:
            assert report.quotient_syzygy_rank == report.expected_quotient_rank

    def test_generator_residual(self):
        """Test the listed generators lie in the syzygy space."""
        report = verify_instance(scroll_spurious([2, 3]))
        assert report.generator_residual is not None
        assert report.generator_residual < 1e-10

    def test_quartic_syzygies_vanish_at_point(self, quartic):
        """Test every syzygy component vanishes at (1, sqrt(-1), 0, 0, 0)."""
        report = verify_instance(quartic)
        assert report.syzygy_dimension > 0
        assert report.expected_quotient_rank is None
        assert report.syzygy_value_at_point is not None
        assert report.syzygy_value_at_point < 1e-9

    def test_quartic_syzygies_leave_span(self, quartic):
        """Test (0, x0x3, -x0x2, 0, ...) is a syzygy whose components are not in span(l)."""
        ring = quartic.ring
        h = np.zeros_like(quartic.l)
        h[1] = ring.linear_form({(1, 0, 0, 1, 0): 1.0})
        h[2] = ring.linear_form({(1, 0, 1, 0, 0): -1.0})
        assert np.linalg.norm(differential_matrix(ring, quartic.l) @ h.ravel()) < 1e-12
        assert span_residual(quartic.l, h[1:3]) > 0.5
        basis = syzygies(ring, quartic.l, 1e-8)
        outside = h.ravel() - basis.vectors.T @ (basis.vectors @ h.ravel())
        assert np.linalg.norm(outside) < 1e-9

    def test_vanishing_point_failure_is_reported(self, quartic):
        """Test a point where the syzygies do not vanish fails verification."""
        point = np.zeros((2, 5))
        point[0, 3] = 1.0
        report = verify_instance(quartic.model_copy(update={"vanishing_point": point}))
        assert report.syzygy_value_at_point > 1e-3
        assert not report.passed

    def test_quartic_is_second_order_stationary(self, quartic):
        """Test sigma(l) - 0.1 g makes l second-order stationary."""
        ring = quartic.ring
        ctx = ObjectiveContext(ring=ring, target=sigma(ring, quartic.l) - 0.1 * quartic.g, k=quartic.k)
        assert np.linalg.norm(gradient(ctx, quartic.l)) < 1e-10
        assert np.linalg.eigvalsh(hessian(ctx, quartic.l))[0] >= -1e-9


class TestDescentCurve:
    """Tests for the curve leaving the Veronese surface example."""

    @pytest.mark.parametrize("eps", [0.05, 0.1])
    @pytest.mark.parametrize("z", [1e-3, 3e-3, 1e-2])
    def test_leading_term(self, eps, z):
        """Test the change is negative and close to -4 eps z^4."""
        value = descent_curve_value(eps, z)
        assert value < 0
        assert 0.8 <= value / (-4 * eps * z**4) <= 1.2

    def test_closed_form(self):
        """Test the change equals 8z^6 + 4z^8 - 4 eps z^4."""
        z, eps = 0.3, 0.1
        assert descent_curve_value(eps, z) == pytest.approx(8 * z**6 + 4 * z**8 - 4 * eps * z**4, rel=1e-9)

    def test_eps_must_be_positive(self):
        """Test a non-positive eps is rejected."""
        with pytest.raises(InvalidSpec):
            descent_curve_value(0.0, 0.1)
