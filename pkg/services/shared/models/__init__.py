"""Shared Pydantic models."""

from services.shared.models.variety import (
    CUBIC_MONOMIALS,
    PlaneCubicSpec,
    ScrollSpec,
    VarietySpec,
    VeroneseSpec,
    parse_variety_spec,
)

__all__ = [
    "CUBIC_MONOMIALS",
    "PlaneCubicSpec",
    "ScrollSpec",
    "VarietySpec",
    "VeroneseSpec",
    "parse_variety_spec",
]
