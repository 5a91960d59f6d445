"""Remainders modulo a single ternary cubic.

The quotient of the polynomial ring by a principal ideal needs no Groebner
machinery: dividing by the one generator under graded reverse lexicographic
order already gives a unique remainder, supported on monomials not divisible
by the leading monomial of the cubic.
"""

import logging
from collections.abc import Mapping, Sequence

import sympy

from services.algebra.src.monomials import Monomial, add, divides, grevlex_key, quotient
from services.shared.errors import DegenerateCubic
from services.shared.models import CUBIC_MONOMIALS

logger = logging.getLogger(__name__)

Polynomial = dict[Monomial, float]


def cubic_terms(coefficients: Sequence[int]) -> dict[Monomial, int]:
    """Nonzero terms of a cubic given in CUBIC_MONOMIALS order."""
    return {m: int(c) for m, c in zip(CUBIC_MONOMIALS, coefficients, strict=True) if c}


def leading_monomial(terms: Mapping[Monomial, float]) -> Monomial:
    """Largest monomial with a nonzero coefficient under grevlex."""
    return max((m for m, c in terms.items() if c), key=grevlex_key)


def check_squarefree(coefficients: Sequence[int]) -> None:
    """Reject cubics with a repeated factor.

    Raises:
        DegenerateCubic: If some irreducible factor appears with multiplicity > 1
    """
    x = sympy.symbols("x0:3")
    expr = sum(
        int(c) * x[0] ** m[0] * x[1] ** m[1] * x[2] ** m[2]
        for m, c in zip(CUBIC_MONOMIALS, coefficients, strict=True)
    )
    _, factors = sympy.sqf_list(expr, *x)
    repeated = [f for f, mult in factors if mult > 1]
    if repeated:
        raise DegenerateCubic(f"cubic has repeated factor {repeated[0]}; the quotient is not a reduced curve")


class CubicReducer:
    """Memoized division by one cubic.

    Each monomial's remainder is computed once from the remainders of strictly
    smaller monomials, so every coefficient comes from a single chain of exact
    integer ratios.
    """

    def __init__(self, coefficients: Sequence[int]):
        """Initialize the reducer.

        Args:
            coefficients: Ten integer coefficients in CUBIC_MONOMIALS order
        """
        self.terms = cubic_terms(coefficients)
        self.lead = leading_monomial(self.terms)
        self.lead_coefficient = float(self.terms[self.lead])
        self._tail = [(m, c / self.lead_coefficient) for m, c in self.terms.items() if m != self.lead]
        self._cache: dict[Monomial, Polynomial] = {}

    def is_reduced(self, m: Monomial) -> bool:
        """True if m is not divisible by the leading monomial."""
        return not divides(self.lead, m)

    def reduce_monomial(self, m: Monomial) -> Polynomial:
        """Remainder of a single monomial."""
        if self.is_reduced(m):
            return {m: 1.0}
        cached = self._cache.get(m)
        if cached is not None:
            return cached
        shift = quotient(m, self.lead)
        result: Polynomial = {}
        # m = shift*lead  ==  -shift*tail/lc  modulo the cubic
        for t, ratio in self._tail:
            for r, c in self.reduce_monomial(add(shift, t)).items():
                result[r] = result.get(r, 0.0) - ratio * c
        result = {r: c for r, c in result.items() if c != 0.0}
        self._cache[m] = result
        return result

    def reduce(self, poly: Mapping[Monomial, float]) -> Polynomial:
        """Remainder of a polynomial; idempotent on reduced input."""
        result: Polynomial = {}
        for m, c in poly.items():
            if c == 0.0:
                continue
            for r, rc in self.reduce_monomial(m).items():
                result[r] = result.get(r, 0.0) + c * rc
        return {r: c for r, c in result.items() if c != 0.0}


def reduce_by_cubic(poly: Mapping[Monomial, float], coefficients: Sequence[int]) -> Polynomial:
    """Remainder of ``poly`` after division by the cubic.

    Args:
        poly: Mapping from 3-variable exponent tuples to coefficients
        coefficients: Cubic coefficients in CUBIC_MONOMIALS order

    Returns:
        The remainder, supported on monomials not divisible by the leading monomial
    """
    return CubicReducer(coefficients).reduce(poly)
