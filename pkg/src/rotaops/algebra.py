"""The n-dimensional null-filiform associative algebra.

Basis e_1..e_n with products e_i e_j = e_{i+j} when i+j <= n and zero
otherwise.  The algebra is commutative, associative, one-generated by e_1,
and nilpotent of index n+1.  Elements are dense coefficient vectors over the
basis; all values are immutable and all operations pure.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import DimsMismatchError, IndexRangeError, ParameterError

ZERO = Fraction(0)


@dataclass(frozen=True)
class AlgebraElement:
    """Coefficient vector over e_1..e_n."""

    n: int
    coeffs: tuple[Fraction, ...]

    @staticmethod
    def of(n: int, coeffs) -> "AlgebraElement":
        cs = tuple(Fraction(c) for c in coeffs)
        if len(cs) != n:
            raise DimsMismatchError(f"expected {n} coefficients, got {len(cs)}")
        return AlgebraElement(n, cs)

    @staticmethod
    def zero(n: int) -> "AlgebraElement":
        return AlgebraElement(n, (ZERO,) * n)

    @staticmethod
    def basis(n: int, i: int) -> "AlgebraElement":
        _check_index(i, n)
        return AlgebraElement(n, tuple(Fraction(1 if k == i - 1 else 0) for k in range(n)))

    @property
    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def coeff(self, i: int) -> Fraction:
        _check_index(i, self.n)
        return self.coeffs[i - 1]

    def __add__(self, other: "AlgebraElement") -> "AlgebraElement":
        _check_dims(self, other)
        return AlgebraElement(self.n, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: "AlgebraElement") -> "AlgebraElement":
        _check_dims(self, other)
        return AlgebraElement(self.n, tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self) -> "AlgebraElement":
        return AlgebraElement(self.n, tuple(-a for a in self.coeffs))

    def scale(self, c) -> "AlgebraElement":
        c = Fraction(c)
        return AlgebraElement(self.n, tuple(a * c for a in self.coeffs))


def _check_index(i: int, n: int) -> None:
    if not 1 <= i <= n:
        raise IndexRangeError(f"basis index {i} outside 1..{n}")


def _check_dims(x: AlgebraElement, y: AlgebraElement) -> None:
    if x.n != y.n:
        raise DimsMismatchError(f"dimension mismatch {x.n} != {y.n}")


def basis_product(i: int, j: int, n: int) -> AlgebraElement:
    """e_i * e_j, which is e_{i+j} when it exists and zero otherwise."""
    _check_index(i, n)
    _check_index(j, n)
    if i + j <= n:
        return AlgebraElement.basis(n, i + j)
    return AlgebraElement.zero(n)


def multiply(x: AlgebraElement, y: AlgebraElement) -> AlgebraElement:
    """Bilinear extension of the basis products.

    The coefficient of e_m in the result is sum of x_i * y_j over i+j = m;
    e_1 never appears in a product.  Iterates only over nonzero entries, so
    products of sparse elements (e.g. operator images of basis vectors) stay
    cheap.
    """
    _check_dims(x, y)
    n = x.n
    out = [ZERO] * n
    nz_x = [(i, c) for i, c in enumerate(x.coeffs, start=1) if c != 0]
    nz_y = [(j, c) for j, c in enumerate(y.coeffs, start=1) if c != 0]
    for i, ci in nz_x:
        for j, cj in nz_y:
            m = i + j
            if m <= n:
                out[m - 1] += ci * cj
    return AlgebraElement(n, tuple(out))


def power(x: AlgebraElement, k: int) -> AlgebraElement:
    """k-th power in the algebra; k must be at least 1 (there is no unit)."""
    if k < 1:
        raise ParameterError("power requires k >= 1: the algebra has no unit element")
    acc = x
    for _ in range(k - 1):
        acc = multiply(acc, x)
    return acc


def grading_degree(x: AlgebraElement):
    """Smallest index with nonzero coefficient, or None for the zero element.

    For homogeneous elements this is the component of the natural grading
    containing x; use is_homogeneous to detect mixed elements.
    """
    for i, c in enumerate(x.coeffs, start=1):
        if c != 0:
            return i
    return None


def is_homogeneous(x: AlgebraElement) -> bool:
    """True when x is zero or supported on a single basis vector."""
    return sum(1 for c in x.coeffs if c != 0) <= 1
