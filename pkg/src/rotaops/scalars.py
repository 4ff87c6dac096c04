"""Exact scalars: rationals, univariate polynomials, rational functions.

Scalars are plain ``fractions.Fraction`` values, which already guarantee the
representation invariants this package relies on (reduced form, positive
denominator, zero stored as 0/1).  Polynomials are coefficient tuples in
ascending degree with a nonzero trailing coefficient; the zero polynomial is
the empty tuple.  Rational functions are stored fully cancelled with a monic
denominator, so equality is plain structural equality.

Everything here is immutable and side-effect free; values can be shared
freely between threads or processes.

Text formats (used verbatim in the CLI JSON):

* scalar      ``"p/q"``, or ``"p"`` when the denominator is 1
* polynomial  ``"c0 + c1*a + c2*a^2"`` (ascending, unit coefficients elided)
* ratfunc     ``"(num)/(den)"``, or the bare polynomial when the
  denominator is 1
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from math import isqrt

from .errors import DivisionByZeroError, PoleError, VariableMismatchError

Scalar = Fraction

ZERO = Fraction(0)
ONE = Fraction(1)

_SCALAR_RE = re.compile(r"^[+-]?\d+(?:/\d+)?$")


def render_scalar(value: Fraction) -> str:
    return str(Fraction(value))


def parse_scalar(text: str) -> Fraction:
    text = text.strip()
    if not _SCALAR_RE.match(text):
        raise ValueError(f"not an exact rational: {text!r}")
    num, slash, den = text.partition("/")
    if slash and int(den) == 0:
        raise DivisionByZeroError(f"zero denominator in {text!r}")
    return Fraction(int(num), int(den)) if slash else Fraction(int(num))


def scalar_arith(lhs: Fraction, rhs: Fraction, op: str) -> Fraction:
    """Apply one of add/sub/mul/div to two exact scalars."""
    if op == "add":
        return lhs + rhs
    if op == "sub":
        return lhs - rhs
    if op == "mul":
        return lhs * rhs
    if op == "div":
        if rhs == 0:
            raise DivisionByZeroError("scalar division by zero")
        return lhs / rhs
    raise ValueError(f"unknown op {op!r}")


def _same_var(a: "Polynomial", b: "Polynomial") -> str:
    """Variable for the result of a binary operation; constants are neutral."""
    if a.var == b.var:
        return a.var
    if a.degree <= 0:
        return b.var
    if b.degree <= 0:
        return a.var
    raise VariableMismatchError(f"mixed variables {a.var!r} and {b.var!r}")


@dataclass(frozen=True)
class Polynomial:
    """Univariate polynomial over the rationals, coefficients ascending."""

    var: str
    coeffs: tuple[Fraction, ...]

    @staticmethod
    def of(var: str, coeffs) -> "Polynomial":
        cs = [Fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        return Polynomial(var, tuple(cs))

    @staticmethod
    def zero(var: str = "a") -> "Polynomial":
        return Polynomial(var, ())

    @staticmethod
    def constant(value, var: str = "a") -> "Polynomial":
        return Polynomial.of(var, [Fraction(value)])

    @staticmethod
    def variable(var: str = "a") -> "Polynomial":
        return Polynomial(var, (ZERO, ONE))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def leading(self) -> Fraction:
        if self.is_zero:
            raise DivisionByZeroError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def coeff(self, k: int) -> Fraction:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else ZERO

    def __add__(self, other: "Polynomial") -> "Polynomial":
        var = _same_var(self, other)
        size = max(len(self.coeffs), len(other.coeffs))
        return Polynomial.of(var, [self.coeff(k) + other.coeff(k) for k in range(size)])

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        return self + (-other)

    def __neg__(self) -> "Polynomial":
        return Polynomial(self.var, tuple(-c for c in self.coeffs))

    def __mul__(self, other: "Polynomial") -> "Polynomial":
        var = _same_var(self, other)
        if self.is_zero or other.is_zero:
            return Polynomial.zero(var)
        out = [ZERO] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, ci in enumerate(self.coeffs):
            if ci == 0:
                continue
            for j, cj in enumerate(other.coeffs):
                out[i + j] += ci * cj
        return Polynomial.of(var, out)

    def scale(self, c) -> "Polynomial":
        c = Fraction(c)
        if c == 0:
            return Polynomial.zero(self.var)
        return Polynomial(self.var, tuple(k * c for k in self.coeffs))

    def shift(self, k: int) -> "Polynomial":
        """Multiply by var**k."""
        if self.is_zero:
            return self
        return Polynomial(self.var, (ZERO,) * k + self.coeffs)

    def divmod(self, other: "Polynomial") -> tuple["Polynomial", "Polynomial"]:
        var = _same_var(self, other)
        if other.is_zero:
            raise DivisionByZeroError("polynomial division by zero")
        rem = list(self.coeffs)
        quot = [ZERO] * max(0, len(rem) - len(other.coeffs) + 1)
        d = other.degree
        lead = other.leading
        while len(rem) - 1 >= d and rem:
            k = len(rem) - 1 - d
            factor = rem[-1] / lead
            quot[k] = factor
            for j, cj in enumerate(other.coeffs):
                rem[k + j] -= factor * cj
            while rem and rem[-1] == 0:
                rem.pop()
        return Polynomial.of(var, quot), Polynomial.of(var, rem)

    def monic(self) -> "Polynomial":
        if self.is_zero:
            return self
        return self.scale(1 / self.leading)

    def __call__(self, point) -> Fraction:
        point = Fraction(point)
        acc = ZERO
        for c in reversed(self.coeffs):
            acc = acc * point + c
        return acc

    def __str__(self) -> str:
        return render_poly(self)


def poly_gcd(p: Polynomial, q: Polynomial) -> Polynomial:
    """Monic greatest common divisor; gcd(0, q) is the monic form of q."""
    _same_var(p, q)
    a, b = p, q
    while not b.is_zero:
        a, b = b, a.divmod(b)[1]
    return a.monic()


def rational_roots(p: Polynomial) -> list[Fraction]:
    """All rational roots of p, ascending.  p must be nonzero."""
    if p.is_zero:
        raise DivisionByZeroError("zero polynomial has every root")
    roots = set()
    coeffs = list(p.coeffs)
    while coeffs[0] == 0:
        roots.add(ZERO)
        coeffs.pop(0)
    scale = 1
    for c in coeffs:
        scale = scale * c.denominator // _gcd_int(scale, c.denominator)
    ints = [int(c * scale) for c in coeffs]
    if len(ints) > 1:
        lead, const = abs(ints[-1]), abs(ints[0])
        for num in _divisors(const):
            for den in _divisors(lead):
                for cand in (Fraction(num, den), Fraction(-num, den)):
                    if p(cand) == 0:
                        roots.add(cand)
    return sorted(roots)


def _gcd_int(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return abs(a) or 1


def _divisors(value: int) -> list[int]:
    out = []
    for d in range(1, isqrt(value) + 1):
        if value % d == 0:
            out.append(d)
            out.append(value // d)
    return sorted(set(out))


@dataclass(frozen=True)
class RationalFunction:
    """Quotient of univariate polynomials, cancelled, monic denominator."""

    num: Polynomial
    den: Polynomial

    @staticmethod
    def of(num: Polynomial, den: Polynomial) -> "RationalFunction":
        var = _same_var(num, den)
        if den.is_zero:
            raise DivisionByZeroError("zero denominator")
        if num.is_zero:
            return RationalFunction(Polynomial.zero(var), Polynomial.constant(1, var))
        g = poly_gcd(num, den)
        if g.degree > 0:
            num = num.divmod(g)[0]
            den = den.divmod(g)[0]
        lead = den.leading
        return RationalFunction(num.scale(1 / lead), den.scale(1 / lead))

    @staticmethod
    def from_scalar(value, var: str = "a") -> "RationalFunction":
        return RationalFunction.of(
            Polynomial.constant(value, var), Polynomial.constant(1, var)
        )

    @staticmethod
    def variable(var: str = "a") -> "RationalFunction":
        return RationalFunction.of(Polynomial.variable(var), Polynomial.constant(1, var))

    @property
    def var(self) -> str:
        return self.num.var if self.num.degree > 0 else self.den.var

    @property
    def is_zero(self) -> bool:
        return self.num.is_zero

    def __add__(self, other: "RationalFunction") -> "RationalFunction":
        return RationalFunction.of(
            self.num * other.den + other.num * self.den, self.den * other.den
        )

    def __sub__(self, other: "RationalFunction") -> "RationalFunction":
        return self + (-other)

    def __neg__(self) -> "RationalFunction":
        return RationalFunction(-self.num, self.den)

    def __mul__(self, other: "RationalFunction") -> "RationalFunction":
        return RationalFunction.of(self.num * other.num, self.den * other.den)

    def __truediv__(self, other: "RationalFunction") -> "RationalFunction":
        if other.is_zero:
            raise DivisionByZeroError("division by the zero rational function")
        return RationalFunction.of(self.num * other.den, self.den * other.num)

    def __call__(self, point) -> Fraction:
        point = Fraction(point)
        d = self.den(point)
        if d == 0:
            raise PoleError(point)
        return self.num(point) / d

    def __str__(self) -> str:
        return render_ratfunc(self)


def ratfunc_eval(f: RationalFunction, point) -> Fraction:
    """Exact evaluation; raises PoleError at a zero of the denominator."""
    return f(point)


# -- text rendering -----------------------------------------------------------


def _term_str(c: Fraction, deg: int, var: str) -> str:
    if deg == 0:
        return render_scalar(c)
    head = var if deg == 1 else f"{var}^{deg}"
    if c == 1:
        return head
    if c == -1:
        return f"-{head}"
    return f"{render_scalar(c)}*{head}"


def render_poly(p: Polynomial) -> str:
    if p.is_zero:
        return "0"
    parts: list[str] = []
    for deg, c in enumerate(p.coeffs):
        if c == 0:
            continue
        if not parts:
            parts.append(_term_str(c, deg, p.var))
        elif c > 0:
            parts.append(f" + {_term_str(c, deg, p.var)}")
        else:
            parts.append(f" - {_term_str(-c, deg, p.var)}")
    return "".join(parts)


_TERM_RE = re.compile(
    r"^(?P<coef>\d+(?:/\d+)?)?"
    r"(?:(?(coef)\*)(?P<var>[A-Za-z_]\w*)(?:\^(?P<exp>\d+))?)?$"
)


def parse_poly(text: str, var: str | None = None) -> Polynomial:
    text = text.strip()
    if not text:
        raise ValueError("empty polynomial")
    chunks = re.split(r"\s*([+-])\s*", text)
    if chunks[0] == "":
        chunks.pop(0)
    else:
        chunks.insert(0, "+")
    if len(chunks) % 2 != 0:
        raise ValueError(f"cannot parse polynomial {text!r}")
    terms: list[tuple[Fraction, int]] = []
    seen_var = None
    for sign, body in zip(chunks[::2], chunks[1::2]):
        m = _TERM_RE.match(body.strip())
        if not m or (m.group("coef") is None and m.group("var") is None):
            raise ValueError(f"cannot parse polynomial term {body!r}")
        coef = parse_scalar(m.group("coef")) if m.group("coef") else ONE
        if sign == "-":
            coef = -coef
        if m.group("var"):
            if seen_var and m.group("var") != seen_var:
                raise VariableMismatchError(f"mixed variables in {text!r}")
            seen_var = m.group("var")
            exp = int(m.group("exp") or 1)
        else:
            exp = 0
        terms.append((coef, exp))
    use_var = seen_var or var or "a"
    if var and seen_var and var != seen_var:
        raise VariableMismatchError(f"expected variable {var!r} in {text!r}")
    coeffs = [ZERO] * (1 + max(exp for _, exp in terms))
    for coef, exp in terms:
        coeffs[exp] += coef
    return Polynomial.of(use_var, coeffs)


def _display_pair(f: RationalFunction) -> tuple[Polynomial, Polynomial]:
    """Rescale num/den jointly so the denominator prints naturally.

    The canonical stored form keeps the denominator monic; for display the
    pair is scaled so the denominator has integer coefficients with content 1
    and a positive lowest-degree nonzero coefficient (so chains print as
    ``(a)/(2 - a)`` rather than ``(-a)/(a - 2)``).
    """
    den = f.den
    scale = Fraction(1)
    for c in den.coeffs:
        scale = Fraction(
            scale.numerator * c.denominator // _gcd_int(scale.numerator, c.denominator)
        )
    ints = [c * scale for c in den.coeffs]
    g = 0
    for c in ints:
        g = _gcd_int(g, c.numerator)
    if g:
        scale = scale / g
    low = next(c for c in den.coeffs if c != 0)
    if low * scale < 0:
        scale = -scale
    return f.num.scale(scale), den.scale(scale)


def render_ratfunc(f: RationalFunction) -> str:
    if f.den.degree == 0:
        return render_poly(f.num)
    num, den = _display_pair(f)
    return f"({render_poly(num)})/({render_poly(den)})"


def parse_ratfunc(text: str, var: str | None = None) -> RationalFunction:
    text = text.strip()
    m = re.match(r"^\((?P<num>[^()]*)\)\s*/\s*\((?P<den>[^()]*)\)$", text)
    if m:
        num = parse_poly(m.group("num"), var)
        den = parse_poly(m.group("den"), var)
        return RationalFunction.of(num, den)
    p = parse_poly(text, var)
    return RationalFunction.of(p, Polynomial.constant(1, p.var))
