"""Linear syzygies, ideal images and restricted quadratic forms.

For a tuple l the differential h -> sum_i l_i h_i maps R1^k to R2. Its
kernel is the space of linear syzygies of l and its image is the degree-2
part of the ideal generated by l. Both come from one SVD, with singular
values below ``tol * s_max`` treated as zero.
"""

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_serializer

from services.algebra.src import CoordinateRing, check_form, check_tuple, differential
from services.shared.config import get_settings


class SyzygyBasis(BaseModel):
    """Orthonormal basis of the kernel of the differential.

    Rows of ``vectors`` are flattened k x dim1 tuples ordered (i, a).
    """

    model_config = ConfigDict(arbitrary_types_allowed=True)

    vectors: np.ndarray = Field(..., description="Orthonormal rows spanning the syzygies")
    k: int = Field(..., ge=1, description="Tuple length")
    dim1: int = Field(..., ge=1, description="Dimension of R1")
    rank: int = Field(..., ge=0, description="Rank of the differential")
    tol: float = Field(..., gt=0, description="Relative singular-value cutoff")

    @property
    def dimension(self) -> int:
        return int(self.vectors.shape[0])

    def tuples(self) -> np.ndarray:
        """Basis vectors reshaped to (dimension, k, dim1)."""
        return self.vectors.reshape(self.dimension, self.k, self.dim1)

    @field_serializer("vectors")
    def serialize_vectors(self, value: np.ndarray) -> list[list[float]]:
        return value.tolist()


def _resolve_tol(tol: float | None) -> float:
    return get_settings().rank_tol if tol is None else tol


def _numerical_rank(s: np.ndarray, tol: float) -> int:
    if s.size == 0 or s[0] == 0.0:
        return 0
    return int(np.sum(s > tol * s[0]))


def differential_matrix(ring: CoordinateRing, l: np.ndarray) -> np.ndarray:
    """dim2 x (k * dim1) matrix whose column (i, a) is l_i * e_a."""
    return differential(ring, l)


def syzygies(ring: CoordinateRing, l: np.ndarray, tol: float | None = None) -> SyzygyBasis:
    """Orthonormal basis of the linear syzygies of l.

    Args:
        ring: Coordinate ring
        l: Tuple of linear forms
        tol: Relative singular-value cutoff; defaults to the configured rank tolerance

    Returns:
        Kernel basis with rank + dimension = k * dim1
    """
    tol = _resolve_tol(tol)
    l = check_tuple(ring, l)
    _, s, vh = np.linalg.svd(differential_matrix(ring, l), full_matrices=True)
    rank = _numerical_rank(s, tol)
    return SyzygyBasis(vectors=vh[rank:].copy(), k=l.shape[0], dim1=ring.dim1, rank=rank, tol=tol)


def ideal_image_basis(ring: CoordinateRing, l: np.ndarray, tol: float | None = None) -> np.ndarray:
    """Orthonormal columns spanning the degree-2 part of the ideal generated by l."""
    tol = _resolve_tol(tol)
    u, s, _ = np.linalg.svd(differential_matrix(ring, l), full_matrices=False)
    return u[:, : _numerical_rank(s, tol)]


def restricted_form(ring: CoordinateRing, g: np.ndarray, basis: SyzygyBasis) -> np.ndarray:
    """Matrix of h -> <g, sigma_k(h)> in the coordinates of a syzygy basis."""
    p = ring.pair_matrix(check_form(ring, g))
    v = basis.tuples()
    q = np.einsum("pia,ab,qib->pq", v, p, v)
    return 0.5 * (q + q.T)


def quotient_syzygy_rank(ring: CoordinateRing, l: np.ndarray, basis: SyzygyBasis, tol: float | None = None) -> int:
    """Dimension of the syzygies modulo those whose components all lie in span(l)."""
    tol = _resolve_tol(tol)
    l = check_tuple(ring, l)
    if basis.dimension == 0:
        return 0
    _, s, vh = np.linalg.svd(l, full_matrices=False)
    span = vh[: _numerical_rank(s, tol)]
    projected = basis.tuples() - basis.tuples() @ span.T @ span
    # basis rows have unit norm, so the cutoff is absolute
    singular = np.linalg.svd(projected.reshape(basis.dimension, -1), compute_uv=False)
    return int(np.sum(singular > tol))


def span_residual(l: np.ndarray, components: np.ndarray, tol: float = 1e-10) -> float:
    """Largest distance from a row of ``components`` to the row span of l."""
    l = np.atleast_2d(np.asarray(l, dtype=float))
    components = np.atleast_2d(np.asarray(components, dtype=float))
    _, s, vh = np.linalg.svd(l, full_matrices=False)
    span = vh[: _numerical_rank(s, tol)]
    residual = components - components @ span.T @ span
    return float(np.max(np.linalg.norm(residual, axis=1))) if residual.size else 0.0
