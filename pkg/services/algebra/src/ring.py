"""Coordinate rings of scrolls, Veronese varieties and plane cubic curves.

A ring is described by a monomial basis of its degree-1 part R1, a monomial
basis of its degree-2 part R2, and the multiplication R1 x R1 -> R2 stored as
a sparse (dim1 * dim1) x dim2 matrix whose row ``a * dim1 + b`` is the
coordinate vector of the product of basis elements a and b. The basis of R2
is orthonormal for the inner product used throughout.
"""

import logging
from dataclasses import dataclass, field
from math import ceil, comb, isqrt

import numpy as np
import scipy.sparse as sp

from services.algebra.src.monomials import Monomial, add, label, monomials_of_degree
from services.algebra.src.reduction import CubicReducer, check_squarefree
from services.shared.errors import DegenerateCubic, DimensionMismatch, InvalidSpec
from services.shared.models import PlaneCubicSpec, ScrollSpec, VarietySpec, VeroneseSpec

logger = logging.getLogger(__name__)

REFERENCE_CUBIC: tuple[int, ...] = (-3, 1, 3, -1, 6, 5, -6, 5, 5, 3)
"""-3x0^3 + x0^2x1 + 3x0^2x2 - x0x1^2 + 6x0x1x2 + 5x0x2^2 - 6x1^3 + 5x1^2x2 + 5x1x2^2 + 3x2^3."""


@dataclass(frozen=True, eq=False)
class CoordinateRing:
    """Immutable graded pieces R1, R2 of a coordinate ring.

    Attributes:
        spec: The variety the ring belongs to
        variables: Names of the parametrizing variables
        basis1: Monomial basis of R1
        basis2: Monomial basis of R2 (orthonormal)
        mult_matrix: Sparse (dim1 * dim1) x dim2 multiplication tensor
    """

    spec: VarietySpec
    variables: tuple[str, ...]
    basis1: tuple[Monomial, ...]
    basis2: tuple[Monomial, ...]
    mult_matrix: sp.csr_array
    _index2: dict[Monomial, int] = field(init=False, repr=False)
    mult_by_first: sp.csr_array = field(init=False, repr=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "_index2", {m: i for i, m in enumerate(self.basis2)})
        # row c holds mult(c, a) for every a, laid out as a * dim2 + t
        by_first = self.mult_matrix.reshape((self.dim1, self.dim1 * self.dim2))
        object.__setattr__(self, "mult_by_first", sp.csr_array(by_first))

    @property
    def dim1(self) -> int:
        """Dimension of R1."""
        return len(self.basis1)

    @property
    def dim2(self) -> int:
        """Dimension of R2."""
        return len(self.basis2)

    def mult(self, a: int, b: int) -> np.ndarray:
        """Coordinate vector of the product of basis elements a and b."""
        return self.mult_matrix[[a * self.dim1 + b], :].toarray().ravel()

    def pair_matrix(self, f: np.ndarray) -> np.ndarray:
        """Symmetric matrix P with P[a, b] = <f, mult(a, b)>."""
        return (self.mult_matrix @ check_form(self, f)).reshape(self.dim1, self.dim1)

    def monomial_index(self, exponents: Monomial) -> int:
        """Position of a monomial in basis2."""
        try:
            return self._index2[tuple(exponents)]
        except KeyError as e:
            raise DimensionMismatch(f"{exponents} is not a basis2 monomial") from e

    def basis1_index(self, exponents: Monomial) -> int:
        """Position of a monomial in basis1."""
        try:
            return self.basis1.index(tuple(exponents))
        except ValueError as e:
            raise DimensionMismatch(f"{exponents} is not a basis1 monomial") from e

    def basis1_labels(self) -> list[str]:
        """Readable names of the R1 basis."""
        return [label(m, self.variables) for m in self.basis1]

    def basis2_labels(self) -> list[str]:
        """Readable names of the R2 basis."""
        return [label(m, self.variables) for m in self.basis2]

    def linear_form(self, terms: dict[Monomial, float]) -> np.ndarray:
        """R1 coordinate vector from a monomial -> coefficient mapping."""
        v = np.zeros(self.dim1)
        for m, c in terms.items():
            v[self.basis1_index(m)] += c
        return v

    def quadratic_form(self, terms: dict[Monomial, float]) -> np.ndarray:
        """R2 coordinate vector from a monomial -> coefficient mapping."""
        v = np.zeros(self.dim2)
        for m, c in terms.items():
            v[self.monomial_index(m)] += c
        return v


def check_form(ring: CoordinateRing, f: np.ndarray) -> np.ndarray:
    """Validate a quadratic form against the ring.

    Raises:
        DimensionMismatch: If the vector length differs from dim2
    """
    f = np.asarray(f, dtype=float)
    if f.shape != (ring.dim2,):
        raise DimensionMismatch(f"quadratic form has shape {f.shape}, expected ({ring.dim2},)")
    return f


def check_linear(ring: CoordinateRing, a: np.ndarray) -> np.ndarray:
    """Validate a linear form against the ring."""
    a = np.asarray(a, dtype=float)
    if a.shape != (ring.dim1,):
        raise DimensionMismatch(f"linear form has shape {a.shape}, expected ({ring.dim1},)")
    return a


def check_tuple(ring: CoordinateRing, l: np.ndarray) -> np.ndarray:
    """Validate a k x dim1 tuple of linear forms (k >= 1)."""
    l = np.asarray(l, dtype=float)
    if l.ndim != 2 or l.shape[0] < 1 or l.shape[1] != ring.dim1:
        raise DimensionMismatch(f"linear tuple has shape {l.shape}, expected (k, {ring.dim1}) with k >= 1")
    return l


def _monomial_mult_matrix(basis1: list[Monomial], index2: dict[Monomial, int]) -> sp.csr_array:
    n = len(basis1)
    rows, cols = [], []
    for a, ma in enumerate(basis1):
        for b, mb in enumerate(basis1):
            rows.append(a * n + b)
            cols.append(index2[add(ma, mb)])
    data = np.ones(len(rows))
    return sp.csr_array((data, (rows, cols)), shape=(n * n, len(index2)))


def _build_scroll(spec: ScrollSpec) -> CoordinateRing:
    heights = spec.heights
    m = len(heights)
    variables = ("y0", "y1", *(f"x{j + 1}" for j in range(m)))

    def monomial(y0: int, y1: int, xs: dict[int, int]) -> Monomial:
        return (y0, y1, *(xs.get(s, 0) for s in range(m)))

    basis1 = [monomial(i, n - i, {j: 1}) for j, n in enumerate(heights) for i in range(n, -1, -1)]
    basis2 = []
    for j in range(m):
        for jj in range(j, m):
            total = heights[j] + heights[jj]
            xs = {j: 2} if j == jj else {j: 1, jj: 1}
            basis2.extend(monomial(a, total - a, xs) for a in range(total, -1, -1))
    index2 = {mono: i for i, mono in enumerate(basis2)}

    dim1 = len(basis1)
    expected = (m + 1) * dim1 - comb(m + 1, 2)
    if len(basis2) != expected:
        raise InvalidSpec(f"scroll R2 has {len(basis2)} monomials, expected {expected}")
    return CoordinateRing(spec, variables, tuple(basis1), tuple(basis2), _monomial_mult_matrix(basis1, index2))


def _build_veronese(spec: VeroneseSpec) -> CoordinateRing:
    nvars = spec.m + 1
    variables = tuple(f"x{i}" for i in range(nvars))
    basis1 = monomials_of_degree(nvars, spec.d)
    basis2 = monomials_of_degree(nvars, 2 * spec.d)
    index2 = {mono: i for i, mono in enumerate(basis2)}
    return CoordinateRing(spec, variables, tuple(basis1), tuple(basis2), _monomial_mult_matrix(basis1, index2))


def _build_plane_cubic(spec: PlaneCubicSpec) -> CoordinateRing:
    check_squarefree(spec.cubic)
    reducer = CubicReducer(spec.cubic)
    variables = ("x0", "x1", "x2")
    basis1 = [m for m in monomials_of_degree(3, spec.d) if reducer.is_reduced(m)]
    basis2 = [m for m in monomials_of_degree(3, 2 * spec.d) if reducer.is_reduced(m)]
    if len(basis1) != 3 * spec.d or len(basis2) != 6 * spec.d:
        raise DegenerateCubic(
            f"complement dimensions {len(basis1)}, {len(basis2)} differ from {3 * spec.d}, {6 * spec.d}"
        )
    index2 = {mono: i for i, mono in enumerate(basis2)}

    n = len(basis1)
    rows, cols, data = [], [], []
    for a, ma in enumerate(basis1):
        for b, mb in enumerate(basis1):
            for r, c in reducer.reduce_monomial(add(ma, mb)).items():
                rows.append(a * n + b)
                cols.append(index2[r])
                data.append(c)
    mult = sp.csr_array((np.asarray(data, dtype=float), (rows, cols)), shape=(n * n, len(basis2)))
    if not np.all(np.isfinite(mult.data)):
        raise DegenerateCubic("reduction produced non-finite coefficients")
    return CoordinateRing(spec, variables, tuple(basis1), tuple(basis2), mult)


def build_ring(spec: VarietySpec) -> CoordinateRing:
    """Build the coordinate ring of a variety.

    Args:
        spec: Validated variety description

    Returns:
        The immutable ring with bases and multiplication tensor

    Raises:
        InvalidSpec: If the spec family is unknown or its invariants fail
        DegenerateCubic: If a plane cubic has a repeated factor
    """
    if isinstance(spec, ScrollSpec):
        ring = _build_scroll(spec)
    elif isinstance(spec, VeroneseSpec):
        ring = _build_veronese(spec)
    elif isinstance(spec, PlaneCubicSpec):
        ring = _build_plane_cubic(spec)
    else:
        raise InvalidSpec(f"unsupported variety spec: {spec!r}")
    logger.info(f"Built ring for {spec.label}: dim1={ring.dim1}, dim2={ring.dim2}, nnz={ring.mult_matrix.nnz}")
    return ring


def multiply(ring: CoordinateRing, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Product of two linear forms as a quadratic form.

    Raises:
        DimensionMismatch: If either vector does not have length dim1
    """
    a = check_linear(ring, a)
    b = check_linear(ring, b)
    return ring.mult_matrix.T @ np.outer(a, b).ravel()


def tuple_products(ring: CoordinateRing, l: np.ndarray, h: np.ndarray) -> np.ndarray:
    """Sum of products l_i * h_i over the rows of two tuples of equal shape."""
    l = check_tuple(ring, l)
    h = check_tuple(ring, h)
    if l.shape != h.shape:
        raise DimensionMismatch(f"tuple shapes differ: {l.shape} vs {h.shape}")
    return ring.mult_matrix.T @ (l.T @ h).ravel()


def inner_product(ring: CoordinateRing, f: np.ndarray, g: np.ndarray) -> float:
    """Euclidean inner product with basis2 orthonormal.

    Raises:
        DimensionMismatch: If either vector does not have length dim2
    """
    return float(check_form(ring, f) @ check_form(ring, g))


def random_linear_tuple(ring: CoordinateRing, k: int, seed: int) -> np.ndarray:
    """A k x dim1 matrix of independent standard normal draws.

    Args:
        ring: Coordinate ring supplying dim1
        k: Number of linear forms (>= 1)
        seed: Seed for numpy's default generator

    Raises:
        DimensionMismatch: If k < 1
    """
    if k < 1:
        raise DimensionMismatch(f"k must be >= 1, got {k}")
    return np.random.default_rng(seed).standard_normal((k, ring.dim1))


def random_cubic(seed: int) -> list[int]:
    """Integer cubic coefficients drawn uniformly from [-7, 7], not all zero."""
    rng = np.random.default_rng(seed)
    while True:
        coefficients = [int(c) for c in rng.integers(-7, 8, size=10)]
        if any(coefficients):
            return coefficients


def pythagoras_upper_bound(dim2: int) -> int:
    """Smallest k with binom(k + 1, 2) >= dim2."""
    k = max(1, (isqrt(8 * dim2 + 1) - 1) // 2)
    while comb(k + 1, 2) < dim2:
        k += 1
    while k > 1 and comb(k, 2) >= dim2:
        k -= 1
    return k


def default_k_values(spec: VarietySpec, dim2: int) -> list[int]:
    """Numbers of squares compared for each family in the experiments."""
    if isinstance(spec, ScrollSpec):
        m = len(spec.heights)
        return [m + 1, m + 2, m + 3]
    if isinstance(spec, PlaneCubicSpec):
        return [3, 4, 5]
    k_bar = pythagoras_upper_bound(dim2)
    return [k_bar, ceil(1.1 * k_bar), ceil(1.2 * k_bar)]


def differential(ring: CoordinateRing, l: np.ndarray) -> np.ndarray:
    """Dense dim2 x (k * dim1) matrix of h -> sum_i l_i * h_i.

    Column ``i * dim1 + a`` is the product of l_i with basis element a.
    """
    l = check_tuple(ring, l)
    k = l.shape[0]
    blocks = np.asarray(ring.mult_by_first.T @ l.T).T.reshape(k, ring.dim1, ring.dim2)
    return blocks.transpose(2, 0, 1).reshape(ring.dim2, k * ring.dim1)
