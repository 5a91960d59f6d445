"""The sum-of-squares map, the distance objective and its derivatives.

For a k-tuple l of linear forms the objective is ||sigma_k(l) - target||^2
with sigma_k(l) = sum_i l_i^2. With r = sigma_k(l) - target and
P(f)[a, b] = <f, mult(a, b)>:

    gradient          4 * l @ P(r)
    Hessian           4 * D^T D + 2 * (I_k kron P(r))

where D is the differential h -> sum_i l_i h_i. The Hessian here is the
quadratic form h -> coefficient of t^2 in F(l + t h), which is half of
the second derivative of F. Its sign, and so every stationarity test,
is the same.
"""

import logging
from dataclasses import dataclass

import numpy as np

from services.algebra.src import CoordinateRing, check_form, check_tuple, differential, tuple_products
from services.shared.config import get_settings
from services.shared.errors import DimensionMismatch, SizeLimitExceeded

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class ObjectiveContext:
    """A ring, a target quadratic form and the number of squares.

    Attributes:
        ring: Coordinate ring
        target: Target form f-bar (length dim2)
        k: Number of squares
    """

    ring: CoordinateRing
    target: np.ndarray
    k: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "target", check_form(self.ring, self.target))
        if self.k < 1:
            raise DimensionMismatch(f"k must be >= 1, got {self.k}")

    def check(self, l: np.ndarray) -> np.ndarray:
        """Validate a tuple against the ring and k."""
        l = check_tuple(self.ring, l)
        if l.shape[0] != self.k:
            raise DimensionMismatch(f"expected {self.k} linear forms, got {l.shape[0]}")
        return l


def tau_gram(ring: CoordinateRing, l: np.ndarray) -> np.ndarray:
    """Gram matrix sum_i l_i l_i^T in R1 monomial coordinates."""
    l = check_tuple(ring, l)
    return l.T @ l


def sigma(ring: CoordinateRing, l: np.ndarray) -> np.ndarray:
    """Sum of squares of the rows of l, as a quadratic form."""
    return ring.mult_matrix.T @ tau_gram(ring, l).ravel()


def residual(ctx: ObjectiveContext, l: np.ndarray) -> np.ndarray:
    """sigma_k(l) - target."""
    return sigma(ctx.ring, ctx.check(l)) - ctx.target


def objective(ctx: ObjectiveContext, l: np.ndarray) -> float:
    """Squared distance ||sigma_k(l) - target||^2."""
    r = residual(ctx, l)
    return float(r @ r)


def distance(ctx: ObjectiveContext, l: np.ndarray) -> float:
    """Distance ||sigma_k(l) - target||."""
    return float(np.linalg.norm(residual(ctx, l)))


def objective_and_gradient(ctx: ObjectiveContext, l: np.ndarray) -> tuple[float, np.ndarray]:
    """Objective value and gradient from a single residual evaluation."""
    l = ctx.check(l)
    r = sigma(ctx.ring, l) - ctx.target
    return float(r @ r), 4.0 * l @ ctx.ring.pair_matrix(r)


def gradient(ctx: ObjectiveContext, l: np.ndarray) -> np.ndarray:
    """Gradient; entry (i, a) is 4 <sigma_k(l) - target, l_i * e_a>."""
    return objective_and_gradient(ctx, l)[1]


def hessian_vector_product(ctx: ObjectiveContext, l: np.ndarray, h: np.ndarray) -> np.ndarray:
    """Hessian applied to a direction h of the same shape as l.

    Uses the t^2-coefficient convention of the module, so the result is half
    of the directional derivative of the gradient along h.
    """
    l = ctx.check(l)
    h = ctx.check(h)
    ring = ctx.ring
    r = sigma(ring, l) - ctx.target
    return 4.0 * l @ ring.pair_matrix(tuple_products(ring, l, h)) + 2.0 * h @ ring.pair_matrix(r)


def hessian(ctx: ObjectiveContext, l: np.ndarray, limit: int | None = None) -> np.ndarray:
    """Dense symmetric Hessian of size (k * dim1)^2, rows ordered (i, a).

    h^T H h is the coefficient of t^2 in F(l + t h), half of the second
    derivative of F.

    Args:
        ctx: Objective context
        l: Point of evaluation
        limit: Largest k * dim1 materialized; defaults to the configured limit

    Raises:
        SizeLimitExceeded: If k * dim1 exceeds the limit
    """
    l = ctx.check(l)
    limit = get_settings().dense_hessian_limit if limit is None else limit
    size = l.size
    if size > limit:
        raise SizeLimitExceeded(f"dense Hessian of size {size} exceeds limit {limit}; use hessian_vector_product")
    ring = ctx.ring
    d = differential(ring, l)
    r = sigma(ring, l) - ctx.target
    h = 4.0 * d.T @ d + 2.0 * np.kron(np.eye(ctx.k), ring.pair_matrix(r))
    return 0.5 * (h + h.T)


def gram_rank(ring: CoordinateRing, l: np.ndarray, tol: float = 1e-10) -> int:
    """Numerical rank of the Gram matrix, relative to its largest eigenvalue."""
    eigenvalues = np.linalg.eigvalsh(tau_gram(ring, l))
    top = max(float(eigenvalues[-1]), 0.0)
    if top == 0.0:
        return 0
    return int(np.sum(eigenvalues > tol * top))
