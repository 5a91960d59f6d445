"""Second-order stationarity checks and spurious-point certificates."""

import logging
from enum import Enum

import numpy as np
from pydantic import BaseModel, Field

from services.algebra.src import CoordinateRing, check_form, check_linear, check_tuple, multiply
from services.shared.config import get_settings
from services.sosmap.src import ObjectiveContext, hessian, objective_and_gradient
from services.stationarity.src.syzygy import ideal_image_basis, restricted_form, syzygies

logger = logging.getLogger(__name__)


class Verdict(str, Enum):
    """Outcome of a certificate check."""

    CERTIFIED_SPURIOUS = "certified_spurious"
    REFUTED = "refuted"
    INCONCLUSIVE = "inconclusive"


class SecondOrderReport(BaseModel):
    """First- and second-order optimality data at a tuple."""

    grad_norm: float = Field(..., ge=0, description="Euclidean norm of the gradient")
    hessian_min_eig: float = Field(..., description="Smallest Hessian eigenvalue")
    is_second_order_stationary: bool = Field(..., description="grad_norm <= tol and hessian_min_eig >= -tol")


class CertificateReport(BaseModel):
    """Result of the four certificate checks, evaluated in order.

    A tuple is certified as a spurious second-order stationary point; the
    report never claims a local minimum.
    """

    orthogonal_to_ideal: bool = Field(..., description="g is orthogonal to the ideal image")
    ideal_residual: float = Field(..., ge=0, description="Largest |<g, u>| over the image basis")
    dual_violation_witness_value: float = Field(..., description="<g, w^2>")
    restricted_form_min_eig: float | None = Field(
        default=None, description="Smallest eigenvalue of <g, sigma_k(h)> on the syzygies (None if there are none)"
    )
    kernel_condition_ok: bool = Field(..., description="Null directions of the restricted form are orthogonal to g")
    syzygy_dimension: int = Field(..., ge=0, description="Dimension of the syzygy space")
    failed_check: str | None = Field(default=None, description="First failing check")
    verdict: Verdict = Field(..., description="Certified, refuted or inconclusive")


def verify_second_order(ctx: ObjectiveContext, l: np.ndarray, tol: float | None = None) -> SecondOrderReport:
    """Evaluate the gradient norm and the smallest Hessian eigenvalue at l.

    Raises:
        SizeLimitExceeded: If the dense Hessian is too large
    """
    tol = get_settings().rank_tol if tol is None else tol
    h = hessian(ctx, l)
    _, grad = objective_and_gradient(ctx, l)
    grad_norm = float(np.linalg.norm(grad))
    min_eig = float(np.linalg.eigvalsh(h)[0])
    return SecondOrderReport(
        grad_norm=grad_norm,
        hessian_min_eig=min_eig,
        is_second_order_stationary=grad_norm <= tol and min_eig >= -tol,
    )


def verify_spurious_certificate(
    ring: CoordinateRing, l: np.ndarray, g: np.ndarray, w: np.ndarray, tol: float | None = None
) -> CertificateReport:
    """Check that (g, w) certifies l as a spurious second-order stationary point.

    The checks, in order:

    a. g is orthogonal to the ideal image of l (relative to ||g||)
    b. <g, w^2> < -tol, so g is not a nonnegative functional on squares
    c. h -> <g, sigma_k(h)> is positive semidefinite on the syzygies
    d. every null direction h of that form has g orthogonal to all h_i * e_a

    Failing (a), (b) or (c) refutes the certificate; failing only (d) is
    inconclusive.

    Args:
        ring: Coordinate ring
        l: Candidate tuple
        g: Certificate direction in R2
        w: Linear form witnessing <g, w^2> < 0
        tol: Shared tolerance; defaults to the configured rank tolerance

    Returns:
        The report with every check evaluated

    Raises:
        DimensionMismatch: If l, g or w do not fit the ring
    """
    tol = get_settings().rank_tol if tol is None else tol
    l = check_tuple(ring, l)
    g = check_form(ring, g)
    w = check_linear(ring, w)
    g_norm = float(np.linalg.norm(g))

    image = ideal_image_basis(ring, l, tol)
    ideal_residual = float(np.max(np.abs(image.T @ g))) if image.size else 0.0
    orthogonal = ideal_residual <= tol * g_norm

    witness_value = float(g @ multiply(ring, w, w))
    witness_ok = witness_value < -tol

    basis = syzygies(ring, l, tol)
    min_eig: float | None = None
    kernel_ok = True
    if basis.dimension:
        eigenvalues, eigenvectors = np.linalg.eigh(restricted_form(ring, g, basis))
        min_eig = float(eigenvalues[0])
        null = eigenvectors[:, np.abs(eigenvalues) <= tol]
        if null.size:
            # the orthogonality condition is linear in h, so a basis of null directions suffices
            directions = np.einsum("pn,pia->nia", null, basis.tuples())
            products = directions @ ring.pair_matrix(g)
            kernel_ok = bool(np.max(np.abs(products)) <= tol * max(1.0, g_norm))
    psd = min_eig is None or min_eig >= -tol

    failed = next(
        (name for name, ok in (("a", orthogonal), ("b", witness_ok), ("c", psd), ("d", kernel_ok)) if not ok),
        None,
    )
    if failed is None:
        verdict = Verdict.CERTIFIED_SPURIOUS
    elif failed == "d":
        verdict = Verdict.INCONCLUSIVE
    else:
        verdict = Verdict.REFUTED
    logger.info(
        f"Certificate check: verdict={verdict.value} failed={failed} "
        f"residual={ideal_residual:.2e} witness={witness_value:.3e} syzygies={basis.dimension}"
    )
    return CertificateReport(
        orthogonal_to_ideal=orthogonal,
        ideal_residual=ideal_residual,
        dual_violation_witness_value=witness_value,
        restricted_form_min_eig=min_eig,
        kernel_condition_ok=kernel_ok,
        syzygy_dimension=basis.dimension,
        failed_check=failed,
        verdict=verdict,
    )
