"""Explicit tuples that are spurious second-order stationary points.

Each constructor returns a :class:`GalleryInstance`. Instances that carry a
certificate direction ``g`` also carry a witness ``w`` with <g, w^2> < 0
and pass :func:`verify_spurious_certificate`. Instances may also carry
checkable structure: syzygy generators that must lie in the syzygy space,
the expected rank of that space modulo the trivial part, or a complex
point at which every syzygy must vanish.
"""

import logging
from collections.abc import Callable
from functools import lru_cache
from itertools import combinations_with_replacement
from math import sqrt

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_serializer

from services.algebra.src import CoordinateRing, build_ring
from services.shared.errors import InvalidSpec
from services.shared.models import ScrollSpec, VeroneseSpec
from services.sosmap.src import ObjectiveContext, objective, sigma
from services.stationarity.src import (
    CertificateReport,
    Verdict,
    differential_matrix,
    quotient_syzygy_rank,
    syzygies,
    verify_spurious_certificate,
)

logger = logging.getLogger(__name__)


class GalleryInstance(BaseModel):
    """A tuple on a concrete ring with its certificate or structural data."""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    name: str = Field(..., description="Registry name")
    ring: CoordinateRing = Field(..., description="Coordinate ring")
    l: np.ndarray = Field(..., description="k x dim1 tuple")
    g: np.ndarray | None = Field(default=None, description="Certificate direction in R2")
    witness: np.ndarray | None = Field(default=None, description="Linear form w with <g, w^2> < 0")
    generators: np.ndarray | None = Field(default=None, description="Syzygy generators, shape (count, k, dim1)")
    expected_quotient_rank: int | None = Field(default=None, ge=0, description="Syzygy rank modulo span(l)")
    vanishing_point: np.ndarray | None = Field(
        default=None, description="Real and imaginary parts (2 x nvars) of a point where every syzygy vanishes"
    )
    notes: str = Field(default="", description="Provenance and caveats")

    @property
    def k(self) -> int:
        return int(self.l.shape[0])

    @field_serializer("ring")
    def serialize_ring(self, ring: CoordinateRing) -> dict[str, object]:
        return {"variety": ring.spec.model_dump(), "basis1": ring.basis1_labels(), "basis2": ring.basis2_labels()}

    @field_serializer("l", "g", "witness", "generators", "vanishing_point")
    def serialize_array(self, value: np.ndarray | None) -> list | None:
        return None if value is None else value.tolist()


class GalleryReport(BaseModel):
    """Verification outcome of a gallery instance."""

    name: str
    k: int
    certificate: CertificateReport | None = None
    syzygy_dimension: int
    quotient_syzygy_rank: int
    expected_quotient_rank: int | None = None
    generator_residual: float | None = None
    syzygy_value_at_point: float | None = None
    passed: bool


@lru_cache
def _veronese_surface_ring() -> CoordinateRing:
    return build_ring(VeroneseSpec(m=2, d=2))


def _veronese_surface_tuple(ring: CoordinateRing) -> np.ndarray:
    return np.stack(
        [ring.linear_form({(2, 0, 0): 1.0}), ring.linear_form({(1, 1, 0): 1.0}), ring.linear_form({(0, 2, 0): 1.0})]
    )


def veronese_surface_example() -> GalleryInstance:
    """l = (x0^2, x0x1, x1^2) on the Veronese surface with g = -x2^4 and w = x2^2."""
    ring = _veronese_surface_ring()
    return GalleryInstance(
        name="veronese-surface",
        ring=ring,
        l=_veronese_surface_tuple(ring),
        g=ring.quadratic_form({(0, 0, 4): -1.0}),
        witness=ring.linear_form({(0, 0, 2): 1.0}),
        notes="Spurious second-order stationary for target sigma_3(l) + eps * x2^4 with small eps > 0.",
    )


def veronese_surface_family(b: float) -> np.ndarray:
    """l_b = (x0^2 + b x1^2, sqrt(1 - 2b) x0x1, sqrt(1 - b^2) x1^2); sigma_3 is the same for every b.

    Raises:
        InvalidSpec: If b is outside [0, 1/2]
    """
    if not 0.0 <= b <= 0.5:
        raise InvalidSpec(f"b must lie in [0, 1/2], got {b}")
    ring = _veronese_surface_ring()
    return np.stack(
        [
            ring.linear_form({(2, 0, 0): 1.0, (0, 2, 0): b}),
            ring.linear_form({(1, 1, 0): sqrt(1.0 - 2.0 * b)}),
            ring.linear_form({(0, 2, 0): sqrt(1.0 - b * b)}),
        ]
    )


def descent_curve_value(eps: float, z: float) -> float:
    """Objective change along a quadratic curve leaving the Veronese surface example.

    The target is sigma_3(l) + eps * x2^4 and the curve is
    l + z * (sqrt(2) x1x2, -sqrt(2) x0x2, 0) + z^2 * (-x2^2, 0, -x2^2);
    the change equals 8z^6 + 4z^8 - 4 eps z^4, negative for small z > 0.

    Raises:
        InvalidSpec: If eps is not positive
    """
    if eps <= 0:
        raise InvalidSpec(f"eps must be positive, got {eps}")
    ring = _veronese_surface_ring()
    l = _veronese_surface_tuple(ring)
    target = sigma(ring, l) + eps * ring.quadratic_form({(0, 0, 4): 1.0})
    ctx = ObjectiveContext(ring=ring, target=target, k=3)

    first = sqrt(2.0) * np.stack(
        [ring.linear_form({(0, 1, 1): 1.0}), ring.linear_form({(1, 0, 1): -1.0}), np.zeros(ring.dim1)]
    )
    x2_squared = ring.linear_form({(0, 0, 2): 1.0})
    second = np.stack([-x2_squared, np.zeros(ring.dim1), -x2_squared])
    return objective(ctx, l + z * first + z * z * second) - objective(ctx, l)


def scroll22_generators(ring: CoordinateRing) -> np.ndarray:
    """The four syzygy generators of (y0^2x1, y0y1x1, y1^2x1) on the (2,2) scroll."""

    def form(y0: int, y1: int, sign: float = 1.0) -> np.ndarray:
        return sign * ring.linear_form({(y0, y1, 0, 1): 1.0})

    zero = np.zeros(ring.dim1)
    return np.stack(
        [
            [form(1, 1), form(2, 0, -1.0), zero],
            [form(0, 2), form(1, 1, -1.0), zero],
            [zero, form(1, 1, -1.0), form(2, 0)],
            [zero, form(0, 2, -1.0), form(1, 1)],
        ]
    )


def scroll22_example() -> GalleryInstance:
    """l = (y0^2x1, y0y1x1, y1^2x1) on the (2,2) scroll with g = x2^2(y0^4 + y1^4 - y0^2y1^2/3)."""
    ring = build_ring(ScrollSpec(heights=[2, 2]))
    l = np.stack([ring.linear_form({(2 - i, i, 1, 0): 1.0}) for i in range(3)])
    g = ring.quadratic_form({(4, 0, 0, 2): 1.0, (0, 4, 0, 2): 1.0, (2, 2, 0, 2): -1.0 / 3.0})
    return GalleryInstance(
        name="scroll22",
        ring=ring,
        l=l,
        g=g,
        witness=ring.linear_form({(1, 1, 0, 1): 1.0}),
        generators=scroll22_generators(ring),
        expected_quotient_rank=4,
        notes="Spurious local minimum on the (2,2) scroll; the certificate covers second-order stationarity.",
    )


def _scroll_monomial(m: int, y0: int, y1: int, j: int) -> tuple[int, ...]:
    xs = [0] * m
    xs[j] = 1
    return (y0, y1, *xs)


def _scroll_spurious_tuple(ring: CoordinateRing, heights: list[int]) -> np.ndarray:
    m = len(heights)
    return np.stack(
        [
            ring.linear_form({_scroll_monomial(m, i, n - i, j): 1.0})
            for j, n in enumerate(heights)
            if j >= 1
            for i in range(n + 1)
        ]
    )


def _check_scroll_heights(heights: list[int]) -> ScrollSpec:
    try:
        spec = ScrollSpec(heights=heights)
    except ValidationError as e:
        raise InvalidSpec(str(e)) from e
    if len(spec.heights) < 2:
        raise InvalidSpec(f"need at least two scroll heights, got {heights}")
    return spec


def scroll_spurious_generators(heights: list[int]) -> np.ndarray:
    """Syzygies g_{d,i,j} of the tuple from :func:`scroll_spurious`.

    g_{d,i,j} has y0^d y1^(n1-d) x1 at position l_{i,j} and
    -y0^(d+1) y1^(n1-d-1) x1 at position l_{i-1,j}, for j >= 2,
    1 <= i <= n_j and 0 <= d < n1.

    Returns:
        Array of shape (n1 * sum(n_j for j >= 2), k, dim1)
    """
    spec = _check_scroll_heights(heights)
    ring = build_ring(spec)
    m, n1 = len(heights), heights[0]
    k = sum(n + 1 for n in heights[1:])
    offsets = np.cumsum([0] + [n + 1 for n in heights[1:]])
    generators = []
    for j, n in enumerate(heights[1:]):
        for i in range(1, n + 1):
            for d in range(n1):
                g = np.zeros((k, ring.dim1))
                g[offsets[j] + i] = ring.linear_form({_scroll_monomial(m, d, n1 - d, 0): 1.0})
                g[offsets[j] + i - 1] = ring.linear_form({_scroll_monomial(m, d + 1, n1 - d - 1, 0): -1.0})
                generators.append(g)
    return np.stack(generators)


def scroll_spurious(heights: list[int]) -> GalleryInstance:
    """Tuple of all monomials y0^i y1^(n_j-i) x_j with j >= 2 on a scroll.

    Args:
        heights: Scroll heights with at least two entries

    Raises:
        InvalidSpec: If the heights are invalid or the tuple size differs from n - n1
    """
    spec = _check_scroll_heights(heights)
    ring = build_ring(spec)
    l = _scroll_spurious_tuple(ring, spec.heights)
    n = ring.dim1 - 1
    if l.shape[0] != n - spec.heights[0]:
        raise InvalidSpec(f"tuple has {l.shape[0]} forms, expected n - n1 = {n - spec.heights[0]}")
    generators = scroll_spurious_generators(spec.heights)
    return GalleryInstance(
        name="scroll-spurious",
        ring=ring,
        l=l,
        generators=generators,
        expected_quotient_rank=generators.shape[0],
        notes="No explicit certificate direction; the syzygy structure modulo span(l) is checked instead.",
    )


def veronese_quartic_spurious(m: int = 4) -> GalleryInstance:
    """x0^2 + x1^2 and the quadratic monomials in x2..xm on Veronese(m, 2).

    g is f -> re f(p) at p = (1, sqrt(-1), 0, ..., 0), which vanishes on
    every l_i; w = x0x1 gives <g, w^2> = -1. The syzygies do not lie in
    span(l)^k, but every component of every syzygy vanishes at p.

    Raises:
        InvalidSpec: If m < 2
    """
    if m < 2:
        raise InvalidSpec(f"m must be >= 2, got {m}")
    ring = build_ring(VeroneseSpec(m=m, d=2))
    nvars = m + 1

    def unit(*indices: int) -> tuple[int, ...]:
        e = [0] * nvars
        for index in indices:
            e[index] += 1
        return tuple(e)

    forms = [ring.linear_form({unit(0, 0): 1.0, unit(1, 1): 1.0})]
    forms.extend(ring.linear_form({unit(a, b): 1.0}) for a, b in combinations_with_replacement(range(2, nvars), 2))
    # re(sqrt(-1)^e1) for monomials in x0, x1 only
    g = np.array([(1.0, 0.0, -1.0, 0.0)[e[1] % 4] if not any(e[2:]) else 0.0 for e in ring.basis2])
    point = np.zeros((2, nvars))
    point[0, 0] = 1.0
    point[1, 1] = 1.0
    notes = "Every syzygy of l vanishes at p = (1, sqrt(-1), 0, ..., 0)."
    if m < 10:
        notes += " For m < 10, k is below the Pythagoras number bound and the instance is only a stationarity test case."
    return GalleryInstance(
        name="veronese-quartic",
        ring=ring,
        l=np.stack(forms),
        g=g,
        witness=ring.linear_form({unit(0, 1): 1.0}),
        vanishing_point=point,
        notes=notes,
    )


GALLERY: dict[str, Callable[[], GalleryInstance]] = {
    "veronese-surface": veronese_surface_example,
    "scroll22": scroll22_example,
    "scroll-spurious": lambda: scroll_spurious([2, 3]),
    "veronese-quartic": lambda: veronese_quartic_spurious(4),
}


def _monomial_values(ring: CoordinateRing, point: np.ndarray) -> np.ndarray:
    """Values of the R1 basis monomials at the complex point point[0] + i * point[1]."""
    p = point[0] + 1j * point[1]
    return np.array([np.prod([p[j] ** e for j, e in enumerate(mono) if e]) for mono in ring.basis1])


def verify_instance(instance: GalleryInstance, tol: float = 1e-8) -> GalleryReport:
    """Run the certificate and the structural checks an instance supports."""
    ring, l = instance.ring, instance.l
    certificate = None
    passed = True
    if instance.g is not None and instance.witness is not None:
        certificate = verify_spurious_certificate(ring, l, instance.g, instance.witness, tol)
        passed = certificate.verdict == Verdict.CERTIFIED_SPURIOUS

    basis = syzygies(ring, l, tol)
    rank = quotient_syzygy_rank(ring, l, basis, tol)
    if instance.expected_quotient_rank is not None:
        passed = passed and rank == instance.expected_quotient_rank

    value_at_point = None
    if instance.vanishing_point is not None:
        values = basis.tuples().reshape(-1, ring.dim1) @ _monomial_values(ring, instance.vanishing_point)
        value_at_point = float(np.max(np.abs(values))) if values.size else 0.0
        passed = passed and value_at_point <= tol

    residual = None
    if instance.generators is not None:
        d = differential_matrix(ring, l)
        flat = instance.generators.reshape(instance.generators.shape[0], -1)
        residual = float(np.max(np.linalg.norm(flat @ d.T, axis=1)))
        # generators must also lie in the computed kernel
        outside = flat - flat @ basis.vectors.T @ basis.vectors
        residual = max(residual, float(np.max(np.linalg.norm(outside, axis=1))))
        passed = passed and residual <= tol

    logger.info(f"Verified gallery instance {instance.name}: passed={passed}")
    return GalleryReport(
        name=instance.name,
        k=instance.k,
        certificate=certificate,
        syzygy_dimension=basis.dimension,
        quotient_syzygy_rank=rank,
        expected_quotient_rank=instance.expected_quotient_rank,
        generator_residual=residual,
        syzygy_value_at_point=value_at_point,
        passed=passed,
    )
