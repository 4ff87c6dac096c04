"""Linear operators on the algebra and exact checkers for operator identities.

Supported identities (P a linear operator, d likewise, all over exact
rationals):

* homomorphism              P(x)P(y) = P(xy)
* Rota-Baxter of weight w   P(x)P(y) = P(xP(y) + P(x)y + w*xy)
* Reynolds                  P(x)P(y) = P(xP(y) + P(x)y - P(x)P(y))
* Nijenhuis                 P(x)P(y) = P(xP(y) + P(x)y - P(xy))
* average                   P(x)P(y) = P(xP(y))
* derivation                d(xy) = d(x)y + x d(y)
* differential of weight w  d(xy) = d(x)y + x d(y) + w*d(x)d(y)

Why checking on basis pairs suffices: with the operator fixed, both sides of
every identity above are bilinear in (x, y).  Each term is built from the
(bilinear) algebra product with linear maps applied separately to the x and
y slots, so lhs - rhs is bilinear and vanishes everywhere as soon as it
vanishes on all pairs of basis vectors.  check_identity therefore evaluates
the n*n ordered basis pairs exhaustively and exactly.

The same identity definitions drive reduce_to_psi_equations, which evaluates
them symbolically for a homogeneous operator with unknown weight function psi
and emits the resulting polynomial constraint system.  The checkers and the
reducer share IDENTITY_RULES, so they cannot drift apart.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .algebra import AlgebraElement, multiply
from .errors import (
    DimsMismatchError,
    DivisionByZeroError,
    IndexRangeError,
    ParameterError,
    UnsupportedIdentityError,
)

ZERO = Fraction(0)

_WEIGHTED = ("rota-baxter", "differential")
_KNOWN = (
    "homomorphism",
    "rota-baxter",
    "reynolds",
    "nijenhuis",
    "average",
    "derivation",
    "differential",
)


@dataclass(frozen=True)
class IdentityKind:
    """One of the supported identities, with weight where applicable."""

    name: str
    weight: Fraction | None = None

    def __post_init__(self):
        if self.name not in _KNOWN:
            raise UnsupportedIdentityError(f"unknown identity {self.name!r}")
        if self.name in _WEIGHTED:
            if self.weight is None:
                raise ParameterError(f"{self.name} requires a weight")
            object.__setattr__(self, "weight", Fraction(self.weight))
        elif self.weight is not None:
            raise ParameterError(f"{self.name} does not take a weight")

    @staticmethod
    def homomorphism() -> "IdentityKind":
        return IdentityKind("homomorphism")

    @staticmethod
    def rota_baxter(weight) -> "IdentityKind":
        return IdentityKind("rota-baxter", Fraction(weight))

    @staticmethod
    def reynolds() -> "IdentityKind":
        return IdentityKind("reynolds")

    @staticmethod
    def nijenhuis() -> "IdentityKind":
        return IdentityKind("nijenhuis")

    @staticmethod
    def average() -> "IdentityKind":
        return IdentityKind("average")

    @staticmethod
    def derivation() -> "IdentityKind":
        return IdentityKind("derivation")

    @staticmethod
    def differential(weight) -> "IdentityKind":
        return IdentityKind("differential", Fraction(weight))

    def describe(self) -> str:
        if self.name in _WEIGHTED:
            return f"{self.name}({self.weight})"
        return self.name


@dataclass(frozen=True)
class MatrixOperator:
    """General linear operator; column j holds the image of e_j."""

    n: int
    rows: tuple[tuple[Fraction, ...], ...]

    @staticmethod
    def of(n: int, rows) -> "MatrixOperator":
        mat = tuple(tuple(Fraction(c) for c in row) for row in rows)
        if len(mat) != n or any(len(row) != n for row in mat):
            raise DimsMismatchError(f"expected {n}x{n} matrix")
        return MatrixOperator(n, mat)

    @staticmethod
    def zero(n: int) -> "MatrixOperator":
        return MatrixOperator(n, tuple((ZERO,) * n for _ in range(n)))

    @staticmethod
    def identity(n: int) -> "MatrixOperator":
        return MatrixOperator(
            n, tuple(tuple(Fraction(1 if r == c else 0) for c in range(n)) for r in range(n))
        )

    @staticmethod
    def from_columns(n: int, columns) -> "MatrixOperator":
        cols = [tuple(Fraction(c) for c in col) for col in columns]
        if len(cols) != n or any(len(col) != n for col in cols):
            raise DimsMismatchError(f"expected {n} columns of height {n}")
        return MatrixOperator(n, tuple(tuple(col[r] for col in cols) for r in range(n)))

    def column(self, j: int) -> AlgebraElement:
        if not 1 <= j <= self.n:
            raise IndexRangeError(f"column {j} outside 1..{self.n}")
        return AlgebraElement(self.n, tuple(self.rows[r][j - 1] for r in range(self.n)))

    def __add__(self, other: "MatrixOperator") -> "MatrixOperator":
        if self.n != other.n:
            raise DimsMismatchError("operator dimension mismatch")
        return MatrixOperator(
            self.n,
            tuple(
                tuple(a + b for a, b in zip(ra, rb)) for ra, rb in zip(self.rows, other.rows)
            ),
        )

    def __sub__(self, other: "MatrixOperator") -> "MatrixOperator":
        return self + other.scale(-1)

    def scale(self, c) -> "MatrixOperator":
        c = Fraction(c)
        return MatrixOperator(self.n, tuple(tuple(a * c for a in row) for row in self.rows))

    def compose(self, other: "MatrixOperator") -> "MatrixOperator":
        """Matrix product self @ other."""
        if self.n != other.n:
            raise DimsMismatchError("operator dimension mismatch")
        n = self.n
        return MatrixOperator(
            n,
            tuple(
                tuple(
                    sum((self.rows[r][k] * other.rows[k][c] for k in range(n)), ZERO)
                    for c in range(n)
                )
                for r in range(n)
            ),
        )

    @property
    def is_zero(self) -> bool:
        return all(c == 0 for row in self.rows for c in row)


def apply(op: MatrixOperator, x: AlgebraElement) -> AlgebraElement:
    """Exact matrix-vector product."""
    if op.n != x.n:
        raise DimsMismatchError("operator/element dimension mismatch")
    n = op.n
    out = [ZERO] * n
    for j, c in enumerate(x.coeffs, start=1):
        if c == 0:
            continue
        col = op.rows
        for r in range(n):
            entry = col[r][j - 1]
            if entry != 0:
                out[r] += entry * c
    return AlgebraElement(n, tuple(out))


@dataclass(frozen=True)
class HomogeneousOperator:
    """Degree-k operator: e_i maps to psi(i) e_{i+k}, wrapping past n."""

    n: int
    degree: int
    psi: tuple[Fraction, ...]

    @staticmethod
    def of(n: int, degree: int, psi) -> "HomogeneousOperator":
        values = tuple(Fraction(c) for c in psi)
        if len(values) != n:
            raise DimsMismatchError(f"expected {n} psi values, got {len(values)}")
        if not 0 <= degree <= n - 1:
            raise ParameterError(f"degree {degree} outside 0..{n - 1}")
        return HomogeneousOperator(n, degree, values)

    def target(self, i: int) -> int:
        """Index of the image of e_i: i+k, or i+k-n on the wrap branch."""
        if not 1 <= i <= self.n:
            raise IndexRangeError(f"basis index {i} outside 1..{self.n}")
        t = i + self.degree
        return t if t <= self.n else t - self.n


def hom_to_matrix(h: HomogeneousOperator) -> MatrixOperator:
    """Matrix with single entry psi(i) in column i at the target row."""
    cols = []
    for i in range(1, h.n + 1):
        col = [ZERO] * h.n
        col[h.target(i) - 1] = h.psi[i - 1]
        cols.append(col)
    return MatrixOperator.from_columns(h.n, cols)


@dataclass(frozen=True)
class CheckReport:
    """Outcome of an identity check; a failure names the first bad pair."""

    verdict: bool
    witness: tuple[int, int, AlgebraElement, AlgebraElement] | None = None

    @property
    def passed(self) -> bool:
        return self.verdict


# -- identity rules ------------------------------------------------------------
#
# Each rule returns (lhs, rhs) of its identity evaluated at (x, y).  The rules
# are generic: `P` applies the operator, `mul` is the algebra product, and the
# vector type only needs +, -, and scale().  check_identity instantiates them
# with exact AlgebraElements; reduce_to_psi_equations instantiates them with
# symbolic vectors whose coefficients are polynomials in the unknown psi.


def _rule_homomorphism(P, mul, x, y, weight):
    return mul(P(x), P(y)), P(mul(x, y))


def _rule_rota_baxter(P, mul, x, y, weight):
    px, py = P(x), P(y)
    return mul(px, py), P(mul(x, py) + mul(px, y) + mul(x, y).scale(weight))


def _rule_reynolds(P, mul, x, y, weight):
    px, py = P(x), P(y)
    pp = mul(px, py)
    return pp, P(mul(x, py) + mul(px, y) - pp)


def _rule_nijenhuis(P, mul, x, y, weight):
    px, py = P(x), P(y)
    return mul(px, py), P(mul(x, py) + mul(px, y) - P(mul(x, y)))


def _rule_average(P, mul, x, y, weight):
    return mul(P(x), P(y)), P(mul(x, P(y)))


def _rule_differential(P, mul, x, y, weight):
    dx, dy = P(x), P(y)
    return P(mul(x, y)), mul(dx, y) + mul(x, dy) + mul(dx, dy).scale(weight)


def _rule_derivation(P, mul, x, y, weight):
    return _rule_differential(P, mul, x, y, ZERO)


IDENTITY_RULES = {
    "homomorphism": _rule_homomorphism,
    "rota-baxter": _rule_rota_baxter,
    "reynolds": _rule_reynolds,
    "nijenhuis": _rule_nijenhuis,
    "average": _rule_average,
    "differential": _rule_differential,
    "derivation": _rule_derivation,
}


def check_identity(kind: IdentityKind, primary: MatrixOperator) -> CheckReport:
    """Evaluate the defining identity on all ordered basis pairs.

    Bilinearity of both sides (see module docstring) makes the basis pairs a
    complete test set.  Returns the first violating pair in row-major (i, j)
    order, with both evaluated sides as witness.
    """
    rule = IDENTITY_RULES[kind.name]
    n = primary.n
    weight = kind.weight if kind.weight is not None else ZERO
    columns = [primary.column(j) for j in range(1, n + 1)]

    def P(v: AlgebraElement) -> AlgebraElement:
        out = [ZERO] * n
        for j, c in enumerate(v.coeffs):
            if c == 0:
                continue
            for r, entry in enumerate(columns[j].coeffs):
                if entry != 0:
                    out[r] += entry * c
        return AlgebraElement(n, tuple(out))

    basis = [AlgebraElement.basis(n, i) for i in range(1, n + 1)]
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            lhs, rhs = rule(P, multiply, basis[i - 1], basis[j - 1], weight)
            if lhs.coeffs != rhs.coeffs:
                return CheckReport(False, (i, j, lhs, rhs))
    return CheckReport(True)


def normalize_rb_weight(op: MatrixOperator, weight) -> MatrixOperator:
    """Rescale P to P/weight, turning a weight-w Rota-Baxter operator into a
    weight-1 one (and conversely)."""
    weight = Fraction(weight)
    if weight == 0:
        raise DivisionByZeroError("cannot normalize weight 0")
    return op.scale(1 / weight)


# -- symbolic reduction to psi constraints -------------------------------------


class PsiPoly:
    """Sparse polynomial in the unknowns psi(1)..psi(n).

    Monomials are sorted index tuples, e.g. psi(1)*psi(3) is (1, 3); the
    empty tuple is the constant monomial.
    """

    __slots__ = ("terms",)

    def __init__(self, terms: dict[tuple[int, ...], Fraction] | None = None):
        self.terms = {m: c for m, c in (terms or {}).items() if c != 0}

    @staticmethod
    def const(c) -> "PsiPoly":
        return PsiPoly({(): Fraction(c)})

    @staticmethod
    def unknown(i: int) -> "PsiPoly":
        return PsiPoly({(i,): Fraction(1)})

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: "PsiPoly") -> "PsiPoly":
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, ZERO) + c
        return PsiPoly(out)

    def __sub__(self, other: "PsiPoly") -> "PsiPoly":
        return self + other.scale(-1)

    def __mul__(self, other: "PsiPoly") -> "PsiPoly":
        out: dict[tuple[int, ...], Fraction] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple(sorted(m1 + m2))
                out[m] = out.get(m, ZERO) + c1 * c2
        return PsiPoly(out)

    def scale(self, c) -> "PsiPoly":
        c = Fraction(c)
        return PsiPoly({m: k * c for m, k in self.terms.items()})

    def __neg__(self) -> "PsiPoly":
        return self.scale(-1)

    def evaluate(self, psi: list[Fraction] | tuple[Fraction, ...]) -> Fraction:
        """Value at concrete psi (1-based index i read from psi[i-1])."""
        total = ZERO
        for m, c in self.terms.items():
            val = c
            for idx in m:
                val *= psi[idx - 1]
            total += val
        return total

    def indices(self) -> set[int]:
        return {i for m in self.terms for i in m}

    def canonical(self) -> tuple:
        return tuple(sorted(self.terms.items()))

    def __eq__(self, other) -> bool:
        return isinstance(other, PsiPoly) and self.terms == other.terms

    def __hash__(self):
        return hash(self.canonical())

    def __repr__(self):
        if self.is_zero:
            return "0"
        parts = []
        for m, c in sorted(self.terms.items(), key=lambda kv: (len(kv[0]), kv[0])):
            mono = "*".join(f"psi({i})" for i in m) or "1"
            parts.append(f"{c}*{mono}")
        return " + ".join(parts)


class _SymVec:
    """Vector over the basis with PsiPoly coefficients."""

    __slots__ = ("n", "comps")

    def __init__(self, n: int, comps: dict[int, PsiPoly] | None = None):
        self.n = n
        self.comps = {i: p for i, p in (comps or {}).items() if not p.is_zero}

    @staticmethod
    def basis(n: int, i: int) -> "_SymVec":
        return _SymVec(n, {i: PsiPoly.const(1)})

    def __add__(self, other: "_SymVec") -> "_SymVec":
        out = dict(self.comps)
        for i, p in other.comps.items():
            out[i] = out.get(i, PsiPoly()) + p
        return _SymVec(self.n, out)

    def __sub__(self, other: "_SymVec") -> "_SymVec":
        return self + other.scale(-1)

    def scale(self, c) -> "_SymVec":
        if isinstance(c, PsiPoly):
            return _SymVec(self.n, {i: p * c for i, p in self.comps.items()})
        return _SymVec(self.n, {i: p.scale(c) for i, p in self.comps.items()})


def _sym_multiply(x: _SymVec, y: _SymVec) -> _SymVec:
    out: dict[int, PsiPoly] = {}
    for i, p in x.comps.items():
        for j, q in y.comps.items():
            m = i + j
            if m <= x.n:
                out[m] = out.get(m, PsiPoly()) + p * q
    return _SymVec(x.n, out)


@dataclass(frozen=True)
class PsiConstraint:
    """One polynomial relation psi must satisfy, with its provenance.

    pair is the ordered basis pair (i, j) that generated it and component the
    basis index at which the two sides of the identity were compared.
    """

    pair: tuple[int, int]
    component: int
    poly: PsiPoly


def reduce_to_psi_equations(
    kind: IdentityKind, n: int, degree: int
) -> list[PsiConstraint]:
    """Constraint system on psi(1..n) equivalent to the identity check.

    Evaluates the identity symbolically on every ordered basis pair for a
    degree-k homogeneous operator with unknown psi, and collects the nonzero
    components of lhs - rhs.  By the bilinearity argument this finite system
    holds exactly when check_identity passes on the materialized operator.
    """
    if kind.name not in ("rota-baxter", "reynolds", "nijenhuis", "average"):
        raise UnsupportedIdentityError(
            f"psi reduction supports P-identities only, not {kind.name}"
        )
    if not 0 <= degree <= n - 1:
        raise ParameterError(f"degree {degree} outside 0..{n - 1}")
    weight = kind.weight if kind.weight is not None else ZERO
    rule = IDENTITY_RULES[kind.name]

    def target(i: int) -> int:
        t = i + degree
        return t if t <= n else t - n

    def P(v: _SymVec) -> _SymVec:
        out: dict[int, PsiPoly] = {}
        for i, p in v.comps.items():
            t = target(i)
            out[t] = out.get(t, PsiPoly()) + p * PsiPoly.unknown(i)
        return _SymVec(n, out)

    constraints: list[PsiConstraint] = []
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            lhs, rhs = rule(P, _sym_multiply, _SymVec.basis(n, i), _SymVec.basis(n, j), weight)
            diff = lhs - rhs
            for comp in sorted(diff.comps):
                constraints.append(PsiConstraint((i, j), comp, diff.comps[comp]))
    return constraints


def psi_system_holds(constraints: list[PsiConstraint], psi) -> bool:
    """Exact satisfaction test of a reduced system at concrete psi values."""
    values = [Fraction(c) for c in psi]
    return all(c.poly.evaluate(values) == 0 for c in constraints)
