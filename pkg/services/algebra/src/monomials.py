"""Monomial enumeration, orders and labels.

A monomial is a tuple of nonnegative exponents, one slot per variable of
the parametrizing space.
"""

from collections.abc import Iterator, Sequence
from itertools import combinations_with_replacement

Monomial = tuple[int, ...]


def monomials_of_degree(nvars: int, degree: int) -> list[Monomial]:
    """All monomials of a given total degree, in descending lexicographic order.

    Args:
        nvars: Number of variables
        degree: Total degree

    Returns:
        Exponent tuples, x0^degree first
    """
    result = []
    for combo in combinations_with_replacement(range(nvars), degree):
        exps = [0] * nvars
        for var in combo:
            exps[var] += 1
        result.append(tuple(exps))
    return result


def add(a: Monomial, b: Monomial) -> Monomial:
    """Product of two monomials."""
    return tuple(x + y for x, y in zip(a, b, strict=True))


def divides(a: Monomial, b: Monomial) -> bool:
    """True if monomial a divides monomial b."""
    return all(x <= y for x, y in zip(a, b, strict=True))


def quotient(b: Monomial, a: Monomial) -> Monomial:
    """b / a for a monomial a dividing b."""
    return tuple(y - x for x, y in zip(a, b, strict=True))


def grevlex_key(m: Monomial) -> tuple[int, ...]:
    """Sort key for graded reverse lexicographic order with x0 > x1 > ... .

    Larger keys are larger monomials: total degree first, then the monomial
    with the smaller exponent in the last variable wins, then the next-to-last.
    """
    return (sum(m), *(-e for e in reversed(m[1:])))


def label(m: Monomial, names: Sequence[str]) -> str:
    """Readable name such as ``x0^2*x1``; ``1`` for the constant monomial."""
    parts = []
    for name, e in zip(names, m, strict=True):
        if e == 1:
            parts.append(name)
        elif e > 1:
            parts.append(f"{name}^{e}")
    return "*".join(parts) if parts else "1"


def iter_pairs(n: int) -> Iterator[tuple[int, int]]:
    """Index pairs (a, b) with a <= b."""
    for a in range(n):
        for b in range(a, n):
            yield a, b
