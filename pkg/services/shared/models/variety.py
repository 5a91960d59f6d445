"""Declarative descriptions of the supported variety families.

These models are the single source of truth for variety parameters; the
algebra module builds coordinate rings from them and the harness writes
their labels into result tables.
"""

import json
from typing import Annotated, Any, Literal

from pydantic import BaseModel, Field, TypeAdapter, ValidationError, field_validator

from services.shared.errors import InvalidSpec

CUBIC_MONOMIALS: tuple[tuple[int, int, int], ...] = (
    (3, 0, 0),
    (2, 1, 0),
    (2, 0, 1),
    (1, 2, 0),
    (1, 1, 1),
    (1, 0, 2),
    (0, 3, 0),
    (0, 2, 1),
    (0, 1, 2),
    (0, 0, 3),
)
"""Exponents of the ten cubic coefficients, in the order they are supplied."""


class ScrollSpec(BaseModel):
    """Rational normal scroll given by the heights of its Lawrence prism.

    Attributes:
        family: Discriminator, always "scroll".
        heights: Non-decreasing positive heights n_1 <= ... <= n_m.
    """

    family: Literal["scroll"] = "scroll"
    heights: list[int] = Field(..., min_length=1, description="Prism heights", examples=[[2, 2], [5, 10]])

    @field_validator("heights")
    @classmethod
    def check_heights(cls, v: list[int]) -> list[int]:
        """Heights must be positive and sorted."""
        if any(h < 1 for h in v):
            raise ValueError("scroll heights must be >= 1")
        if any(a > b for a, b in zip(v, v[1:], strict=False)):
            raise ValueError("scroll heights must be non-decreasing")
        return v

    @property
    def label(self) -> str:
        """Short label used in result tables."""
        return "scroll(" + ",".join(str(h) for h in self.heights) + ")"


class VeroneseSpec(BaseModel):
    """Veronese re-embedding of projective m-space by forms of degree d.

    Attributes:
        family: Discriminator, always "veronese".
        m: Dimension of the projective space.
        d: Embedding degree.
    """

    family: Literal["veronese"] = "veronese"
    m: int = Field(..., ge=1, description="Ambient projective dimension", examples=[2, 4])
    d: int = Field(..., ge=1, description="Embedding degree", examples=[2])

    @property
    def label(self) -> str:
        """Short label used in result tables."""
        return f"veronese(m={self.m},d={self.d})"


class PlaneCubicSpec(BaseModel):
    """Degree-d re-embedding of a plane curve cut out by a ternary cubic.

    Attributes:
        family: Discriminator, always "plane_cubic".
        cubic: Ten integer coefficients ordered as CUBIC_MONOMIALS.
        d: Embedding degree (at least 3).
    """

    family: Literal["plane_cubic"] = "plane_cubic"
    cubic: list[int] = Field(..., min_length=10, max_length=10, description="Cubic coefficients")
    d: int = Field(..., ge=3, description="Embedding degree", examples=[3, 10])

    @field_validator("cubic")
    @classmethod
    def check_cubic(cls, v: list[int]) -> list[int]:
        """The cubic may not be identically zero."""
        if not any(v):
            raise ValueError("cubic must not be identically zero")
        return v

    @property
    def label(self) -> str:
        """Short label used in result tables."""
        return f"plane_cubic(d={self.d})"


VarietySpec = Annotated[ScrollSpec | VeroneseSpec | PlaneCubicSpec, Field(discriminator="family")]

_spec_adapter: TypeAdapter[Any] = TypeAdapter(VarietySpec)


def parse_variety_spec(data: dict[str, Any] | str) -> ScrollSpec | VeroneseSpec | PlaneCubicSpec:
    """Parse a variety spec from a JSON object or JSON text.

    Args:
        data: Mapping with a "family" key, or its JSON serialization

    Returns:
        The validated spec model

    Raises:
        InvalidSpec: If the JSON is malformed or a spec invariant is violated
    """
    try:
        if isinstance(data, str):
            data = json.loads(data)
        return _spec_adapter.validate_python(data)
    except (ValidationError, json.JSONDecodeError) as e:
        raise InvalidSpec(str(e)) from e
