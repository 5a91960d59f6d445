"""Syzygies, ideal images and spurious stationary point certificates."""

from services.stationarity.src.certificate import (
    CertificateReport,
    SecondOrderReport,
    Verdict,
    verify_second_order,
    verify_spurious_certificate,
)
from services.stationarity.src.syzygy import (
    SyzygyBasis,
    differential_matrix,
    ideal_image_basis,
    quotient_syzygy_rank,
    restricted_form,
    span_residual,
    syzygies,
)

__all__ = [
    "CertificateReport",
    "SecondOrderReport",
    "SyzygyBasis",
    "Verdict",
    "differential_matrix",
    "ideal_image_basis",
    "quotient_syzygy_rank",
    "restricted_form",
    "span_residual",
    "syzygies",
    "verify_second_order",
    "verify_spurious_certificate",
]
