"""Coordinate rings and polynomial arithmetic in fixed monomial bases."""

from services.algebra.src.reduction import CubicReducer, check_squarefree, reduce_by_cubic
from services.algebra.src.ring import (
    REFERENCE_CUBIC,
    CoordinateRing,
    build_ring,
    check_form,
    check_linear,
    check_tuple,
    default_k_values,
    differential,
    inner_product,
    multiply,
    pythagoras_upper_bound,
    random_cubic,
    random_linear_tuple,
    tuple_products,
)

__all__ = [
    "REFERENCE_CUBIC",
    "CoordinateRing",
    "CubicReducer",
    "build_ring",
    "check_form",
    "check_linear",
    "check_squarefree",
    "check_tuple",
    "default_k_values",
    "differential",
    "inner_product",
    "multiply",
    "pythagoras_upper_bound",
    "random_cubic",
    "random_linear_tuple",
    "reduce_by_cubic",
    "tuple_products",
]
