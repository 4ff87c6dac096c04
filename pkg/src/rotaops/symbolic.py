"""Exact symbolic values for the classification solver.

The solver propagates closed forms like a/(2 - a) or a^2/(2a - b) for the
weight function of a homogeneous operator.  Those forms live in the fraction
field of multivariate polynomials over the rationals.  Fractions are kept in
a *factored* shape (a rational unit times powers of primitive polynomial
atoms over powers of atoms), so the cancellations that appear when a
recurrence feeds on its own output happen structurally, without any
multivariate gcd.  Sums expand to a single new atom; zero- and equality
tests reduce to exact polynomial identity and are never probabilistic.

A solution family assigns one symbolic value per basis index: Zero, a free
parameter, or an expression in earlier parameters.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import isqrt

from .errors import DivisionByZeroError, PoleError
from .scalars import Polynomial, RationalFunction, rational_roots, render_ratfunc

ZERO = Fraction(0)
ONE = Fraction(1)

# -- sparse multivariate polynomials -------------------------------------------

Monomial = tuple[tuple[str, int], ...]  # sorted by variable name
MPoly = dict[Monomial, Fraction]


def mp_const(c) -> MPoly:
    c = Fraction(c)
    return {(): c} if c != 0 else {}


def mp_var(name: str) -> MPoly:
    return {((name, 1),): ONE}


def mp_is_zero(p: MPoly) -> bool:
    return not p


def mp_add(p: MPoly, q: MPoly) -> MPoly:
    out = dict(p)
    for m, c in q.items():
        s = out.get(m, ZERO) + c
        if s == 0:
            out.pop(m, None)
        else:
            out[m] = s
    return out


def mp_neg(p: MPoly) -> MPoly:
    return {m: -c for m, c in p.items()}


def mp_scale(p: MPoly, c) -> MPoly:
    c = Fraction(c)
    if c == 0:
        return {}
    return {m: k * c for m, k in p.items()}


def _mono_mul(m1: Monomial, m2: Monomial) -> Monomial:
    d = dict(m1)
    for name, e in m2:
        d[name] = d.get(name, 0) + e
    return tuple(sorted(d.items()))


def mp_mul(p: MPoly, q: MPoly) -> MPoly:
    out: MPoly = {}
    for m1, c1 in p.items():
        for m2, c2 in q.items():
            m = _mono_mul(m1, m2)
            s = out.get(m, ZERO) + c1 * c2
            if s == 0:
                out.pop(m, None)
            else:
                out[m] = s
    return out


def mp_pow(p: MPoly, e: int) -> MPoly:
    out = mp_const(1)
    for _ in range(e):
        out = mp_mul(out, p)
    return out


def mp_vars(p: MPoly) -> set[str]:
    return {name for m in p for name, _ in m}


def mp_total_degree(p: MPoly) -> int:
    return max((sum(e for _, e in m) for m in p), default=0)


def _mono_key(m: Monomial):
    return (sum(e for _, e in m), m)


def mp_leading(p: MPoly) -> tuple[Monomial, Fraction]:
    m = max(p, key=_mono_key)
    return m, p[m]


def mp_eval(p: MPoly, point: dict[str, Fraction]) -> Fraction:
    total = ZERO
    for m, c in p.items():
        val = c
        for name, e in m:
            val *= point[name] ** e
        total += val
    return total


def mp_eval_partial(p: MPoly, point: dict[str, Fraction]) -> MPoly:
    out: MPoly = {}
    for m, c in p.items():
        val = c
        rest = []
        for name, e in m:
            if name in point:
                val *= point[name] ** e
            else:
                rest.append((name, e))
        if val == 0:
            continue
        key = tuple(rest)
        s = out.get(key, ZERO) + val
        if s == 0:
            out.pop(key, None)
        else:
            out[key] = s
    return out


def mp_degree_in(p: MPoly, name: str) -> int:
    deg = 0
    for m in p:
        for v, e in m:
            if v == name:
                deg = max(deg, e)
    return deg


def mp_coeffs_in(p: MPoly, name: str) -> dict[int, MPoly]:
    """Group the terms of p by the exponent of one variable (removed)."""
    out: dict[int, MPoly] = {}
    for m, c in p.items():
        e = 0
        rest = []
        for v, k in m:
            if v == name:
                e = k
            else:
                rest.append((v, k))
        bucket = out.setdefault(e, {})
        key = tuple(rest)
        s = bucket.get(key, ZERO) + c
        if s == 0:
            bucket.pop(key, None)
        else:
            bucket[key] = s
    return {e: b for e, b in out.items() if b}


def mp_substitute(p: MPoly, name: str, vnum: MPoly, vden: MPoly) -> tuple[MPoly, int]:
    """p with name := vnum/vden, cleared: returns (q, d) with value q/vden^d."""
    by_exp = mp_coeffs_in(p, name)
    if not by_exp:
        return {}, 0
    d = max(by_exp)
    q: MPoly = {}
    for e, coeff in by_exp.items():
        term = mp_mul(coeff, mp_mul(mp_pow(vnum, e), mp_pow(vden, d - e)))
        q = mp_add(q, term)
    return q, d


def _frac_sqrt(c: Fraction) -> Fraction | None:
    if c < 0:
        return None
    rn, rd = isqrt(c.numerator), isqrt(c.denominator)
    if rn * rn == c.numerator and rd * rd == c.denominator:
        return Fraction(rn, rd)
    return None


def mp_sqrt(p: MPoly) -> MPoly | None:
    """Exact polynomial square root, or None when p is not a square."""
    if mp_is_zero(p):
        return {}
    lead_m, lead_c = mp_leading(p)
    if any(e % 2 for _, e in lead_m):
        return None
    root_c = _frac_sqrt(lead_c)
    if root_c is None:
        return None
    root_m = tuple((v, e // 2) for v, e in lead_m)
    root: MPoly = {root_m: root_c}
    guard = 4 * (len(p) + 1) ** 2
    while True:
        rem = mp_add(p, mp_neg(mp_mul(root, root)))
        if mp_is_zero(rem):
            return root
        guard -= 1
        if guard < 0:
            return None
        m, c = mp_leading(rem)
        # next term t satisfies 2*lead(root)*t = leading remainder
        diff = dict(m)
        for v, e in root_m:
            diff[v] = diff.get(v, 0) - e
            if diff[v] < 0:
                return None
            if diff[v] == 0:
                del diff[v]
        t_m = tuple(sorted(diff.items()))
        root = mp_add(root, {t_m: c / (2 * root_c)})


def mp_render(p: MPoly) -> str:
    if mp_is_zero(p):
        return "0"
    parts: list[str] = []
    for m in sorted(p, key=_mono_key):
        c = p[m]
        head = "*".join(v if e == 1 else f"{v}^{e}" for v, e in m)
        if not head:
            body = str(abs(c))
        elif abs(c) == 1:
            body = head
        else:
            body = f"{abs(c)}*{head}"
        if not parts:
            parts.append(body if c > 0 else f"-{body}")
        else:
            parts.append(f" + {body}" if c > 0 else f" - {body}")
    return "".join(parts)


# -- factored fractions ---------------------------------------------------------

Atom = tuple[tuple[Monomial, Fraction], ...]  # frozen primitive polynomial
Factors = tuple[tuple[Atom, int], ...]


def _freeze(p: MPoly) -> Atom:
    return tuple(sorted(p.items(), key=lambda kv: _mono_key(kv[0])))


def _thaw(a: Atom) -> MPoly:
    return dict(a)


def _gcd_int(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return abs(a) or 1


def _atomize(p: MPoly) -> tuple[Fraction, dict[Atom, int]]:
    """Split a polynomial into unit * variable-powers * primitive atom."""
    if mp_is_zero(p):
        return ZERO, {}
    # rational content, sign fixed by the leading (graded-lex) coefficient
    denom_lcm = 1
    for c in p.values():
        denom_lcm = denom_lcm * c.denominator // _gcd_int(denom_lcm, c.denominator)
    num_gcd = 0
    for c in p.values():
        num_gcd = _gcd_int(num_gcd, c.numerator * denom_lcm)
    unit = Fraction(num_gcd, denom_lcm)
    if mp_leading(p)[1] < 0:
        unit = -unit
    prim = {m: c / unit for m, c in p.items()}
    # monomial content
    common: dict[str, int] = {}
    first = True
    for m in prim:
        d = dict(m)
        if first:
            common = d
            first = False
        else:
            common = {v: min(e, d[v]) for v, e in common.items() if v in d}
        if not common:
            break
    atoms: dict[Atom, int] = {}
    for v, e in sorted(common.items()):
        atoms[_freeze(mp_var(v))] = e
    if common:
        stripped: MPoly = {}
        for m, c in prim.items():
            d = dict(m)
            for v, e in common.items():
                d[v] -= e
                if d[v] == 0:
                    del d[v]
            stripped[tuple(sorted(d.items()))] = c
        prim = stripped
    if prim != {(): ONE}:
        key = _freeze(prim)
        atoms[key] = atoms.get(key, 0) + 1
    return unit, atoms


@dataclass(frozen=True)
class MFrac:
    """Element of the fraction field Q(params), kept factored."""

    unit: Fraction
    num: Factors
    den: Factors

    @staticmethod
    def _make(unit: Fraction, num: dict[Atom, int], den: dict[Atom, int]) -> "MFrac":
        if unit == 0:
            return MFRAC_ZERO
        for a in list(num):
            if a in den:
                k = min(num[a], den[a])
                num[a] -= k
                den[a] -= k
        num = {a: e for a, e in num.items() if e}
        den = {a: e for a, e in den.items() if e}
        order = lambda item: item[0]
        return MFrac(unit, tuple(sorted(num.items(), key=order)), tuple(sorted(den.items(), key=order)))

    @staticmethod
    def const(c) -> "MFrac":
        c = Fraction(c)
        return MFrac(c, (), ()) if c != 0 else MFRAC_ZERO

    @staticmethod
    def var(name: str) -> "MFrac":
        return MFrac(ONE, ((_freeze(mp_var(name)), 1),), ())

    @staticmethod
    def from_polys(num: MPoly, den: MPoly) -> "MFrac":
        if mp_is_zero(den):
            raise DivisionByZeroError("zero denominator")
        un, an = _atomize(num)
        ud, ad = _atomize(den)
        if un == 0:
            return MFRAC_ZERO
        return MFrac._make(un / ud, an, {**ad})

    @property
    def is_zero(self) -> bool:
        return self.unit == 0

    def _ncounter(self) -> dict[Atom, int]:
        return dict(self.num)

    def _dcounter(self) -> dict[Atom, int]:
        return dict(self.den)

    def __mul__(self, other: "MFrac") -> "MFrac":
        if self.is_zero or other.is_zero:
            return MFRAC_ZERO
        num = self._ncounter()
        for a, e in other.num:
            num[a] = num.get(a, 0) + e
        den = self._dcounter()
        for a, e in other.den:
            den[a] = den.get(a, 0) + e
        return MFrac._make(self.unit * other.unit, num, den)

    def __truediv__(self, other: "MFrac") -> "MFrac":
        if other.is_zero:
            raise DivisionByZeroError("symbolic division by zero")
        inv = MFrac(1 / other.unit, other.den, other.num)
        return self * inv

    def __neg__(self) -> "MFrac":
        if self.is_zero:
            return self
        return MFrac(-self.unit, self.num, self.den)

    def __add__(self, other: "MFrac") -> "MFrac":
        if self.is_zero:
            return other
        if other.is_zero:
            return self
        den_union: dict[Atom, int] = self._dcounter()
        for a, e in other.den:
            den_union[a] = max(den_union.get(a, 0), e)
        def lifted(f: "MFrac") -> MPoly:
            poly = mp_scale(f.expand_num(), f.unit)
            fden = dict(f.den)
            for a, e in den_union.items():
                extra = e - fden.get(a, 0)
                for _ in range(extra):
                    poly = mp_mul(poly, _thaw(a))
            return poly
        total = mp_add(lifted(self), lifted(other))
        if mp_is_zero(total):
            return MFRAC_ZERO
        unit, atoms = _atomize(total)
        return MFrac._make(unit, atoms, den_union)

    def __sub__(self, other: "MFrac") -> "MFrac":
        return self + (-other)

    def equals(self, other: "MFrac") -> bool:
        return (self - other).is_zero

    def expand_num(self) -> MPoly:
        poly = mp_const(1)
        for a, e in self.num:
            poly = mp_mul(poly, mp_pow(_thaw(a), e))
        return poly

    def expand_den(self) -> MPoly:
        poly = mp_const(1)
        for a, e in self.den:
            poly = mp_mul(poly, mp_pow(_thaw(a), e))
        return poly

    def vars(self) -> set[str]:
        out: set[str] = set()
        for a, _ in self.num + self.den:
            for m, _c in a:
                for v, _e in m:
                    out.add(v)
        return out

    def degree_bound(self) -> int:
        total = 0
        for a, e in self.num + self.den:
            total += e * mp_total_degree(_thaw(a))
        return total

    def evaluate(self, point: dict[str, Fraction]) -> Fraction:
        if self.is_zero:
            return ZERO
        val = self.unit
        for a, e in self.num:
            val *= mp_eval(_thaw(a), point) ** e
        for a, e in self.den:
            d = mp_eval(_thaw(a), point)
            if d == 0:
                raise PoleError(point)
            val /= d**e
        return val

    def substitute_scalar(self, partial: dict[str, Fraction]) -> "MFrac":
        """Fix some parameters to rational values; poles raise PoleError."""
        if self.is_zero:
            return self
        out = MFrac.const(self.unit)
        for a, e in self.num:
            poly = mp_eval_partial(_thaw(a), partial)
            if mp_is_zero(poly):
                return MFRAC_ZERO
            u, atoms = _atomize(poly)
            out = out * _pow_frac(MFrac._make(u, atoms, {}), e)
        for a, e in self.den:
            poly = mp_eval_partial(_thaw(a), partial)
            if mp_is_zero(poly):
                raise PoleError(partial)
            u, atoms = _atomize(poly)
            out = out / _pow_frac(MFrac._make(u, atoms, {}), e)
        return out

    def substitute_var(self, name: str, value: "MFrac") -> "MFrac":
        """Symbolic substitution name := value."""
        if self.is_zero:
            return self
        vnum = mp_scale(value.expand_num(), value.unit)
        vden = value.expand_den()
        out = MFrac.const(self.unit)
        for factors, invert in ((self.num, False), (self.den, True)):
            for a, e in factors:
                poly = _thaw(a)
                if name not in mp_vars(poly):
                    piece = MFrac._make(ONE, {a: 1}, {})
                else:
                    q, d = mp_substitute(poly, name, vnum, vden)
                    if mp_is_zero(q):
                        if invert:
                            raise DivisionByZeroError("denominator vanishes under substitution")
                        return MFRAC_ZERO
                    uq, aq = _atomize(q)
                    ud, ad = _atomize(mp_pow(vden, d)) if d else (ONE, {})
                    piece = MFrac._make(uq / ud, aq, ad)
                piece = _pow_frac(piece, e)
                out = out / piece if invert else out * piece
        return out

    def rename(self, mapping: dict[str, str]) -> "MFrac":
        def ren_atom(a: Atom) -> Atom:
            poly = {}
            for m, c in a:
                m2 = tuple(sorted((mapping.get(v, v), e) for v, e in m))
                poly[m2] = c
            return _freeze(poly)

        return MFrac(
            self.unit,
            tuple(sorted(((ren_atom(a), e) for a, e in self.num))),
            tuple(sorted(((ren_atom(a), e) for a, e in self.den))),
        )

    def sqrt(self) -> "MFrac | None":
        if self.is_zero:
            return self
        u = _frac_sqrt(self.unit)
        if u is None:
            return None
        if all(e % 2 == 0 for _, e in self.num) and all(e % 2 == 0 for _, e in self.den):
            return MFrac(
                u,
                tuple((a, e // 2) for a, e in self.num),
                tuple((a, e // 2) for a, e in self.den),
            )
        rn = mp_sqrt(mp_scale(self.expand_num(), 1))
        rd = mp_sqrt(self.expand_den())
        if rn is None or rd is None:
            return None
        return MFrac.from_polys(mp_scale(rn, u), rd)

    def __repr__(self):
        return f"MFrac({render_value_str(self)})"


MFRAC_ZERO = MFrac(ZERO, (), ())
MFRAC_ONE = MFrac(ONE, (), ())


def _pow_frac(f: MFrac, e: int) -> MFrac:
    out = MFRAC_ONE
    for _ in range(e):
        out = out * f
    return out


def mfrac_to_ratfunc(f: MFrac) -> RationalFunction:
    """Univariate view of a fraction using at most one parameter."""
    names = sorted(f.vars())
    if len(names) > 1:
        raise ValueError("fraction uses more than one parameter")
    var = names[0] if names else "a"

    def to_poly(p: MPoly) -> Polynomial:
        coeffs = [ZERO] * (mp_total_degree(p) + 1)
        for m, c in p.items():
            deg = m[0][1] if m else 0
            coeffs[deg] = c
        return Polynomial.of(var, coeffs)

    return RationalFunction.of(
        to_poly(mp_scale(f.expand_num(), f.unit)), to_poly(f.expand_den())
    )


def render_value_str(f: MFrac) -> str:
    """Canonical text for a symbolic value.

    Single-parameter values go through the univariate rational-function
    renderer (full cancellation, stable display scaling); genuinely
    multivariate ones print as (num)/(den) with expanded polynomials.
    """
    if f.is_zero:
        return "0"
    if len(f.vars()) <= 1:
        return render_ratfunc(mfrac_to_ratfunc(f))
    num = mp_scale(f.expand_num(), f.unit)
    den = f.expand_den()
    if den == mp_const(1):
        return mp_render(num)
    # scale so the denominator has integer content 1 and positive leading term
    unit, _ = _atomize(den)
    num = mp_scale(num, 1 / unit)
    den = mp_scale(den, 1 / unit)
    return f"({mp_render(num)})/({mp_render(den)})"


# -- symbolic assignment values -------------------------------------------------


class SymValue:
    """Marker base: Zero, FreeParam, or Expr."""

    __slots__ = ()


@dataclass(frozen=True)
class Zero(SymValue):
    pass


@dataclass(frozen=True)
class FreeParam(SymValue):
    name: str


@dataclass(frozen=True)
class Expr(SymValue):
    value: MFrac


ZERO_VALUE = Zero()


def as_mfrac(v: SymValue) -> MFrac:
    if isinstance(v, Zero):
        return MFRAC_ZERO
    if isinstance(v, FreeParam):
        return MFrac.var(v.name)
    return v.value


def normalize_value(v: SymValue) -> SymValue:
    if isinstance(v, Expr):
        if v.value.is_zero:
            return ZERO_VALUE
        f = v.value
        if f.unit == 1 and not f.den and len(f.num) == 1:
            atom, e = f.num[0]
            poly = _thaw(atom)
            if e == 1 and len(poly) == 1:
                (mono, c), = poly.items()
                if c == 1 and len(mono) == 1 and mono[0][1] == 1:
                    return FreeParam(mono[0][0])
    return v


def render_value(v: SymValue) -> str:
    if isinstance(v, Zero):
        return "0"
    if isinstance(v, FreeParam):
        return v.name
    return render_value_str(v.value)


# -- solution families ----------------------------------------------------------

PARAM_NAMES = "abcdefghijklmnopqrstuvwxyz"


@dataclass(frozen=True)
class SolutionFamily:
    """One classified branch: a symbolic psi vector with free parameters."""

    identity_name: str
    weight: Fraction | None
    degree: int
    n: int
    assignment: tuple[SymValue, ...]
    free_params: tuple[str, ...]
    excluded_points: tuple[tuple[str, Fraction], ...]
    label: str = ""

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(
            i for i, v in enumerate(self.assignment, start=1) if not isinstance(v, Zero)
        )

    @property
    def is_zero_family(self) -> bool:
        return not self.support


def make_family(
    identity_name: str,
    weight,
    degree: int,
    n: int,
    values: list[SymValue],
    label: str = "",
) -> SolutionFamily:
    """Canonicalize raw branch output into a SolutionFamily.

    Parameters are renamed a, b, c, ... in order of first appearance, the
    excluded points are the rational poles of the single-parameter
    expression denominators (index order, deduplicated), and bare-variable
    expressions collapse to FreeParam entries.
    """
    values = [normalize_value(v) for v in values]
    order: list[str] = []
    for v in values:
        if isinstance(v, FreeParam) and v.name not in order:
            order.append(v.name)
    mapping = {old: PARAM_NAMES[k] for k, old in enumerate(order)}
    renamed: list[SymValue] = []
    for v in values:
        if isinstance(v, FreeParam):
            renamed.append(FreeParam(mapping[v.name]))
        elif isinstance(v, Expr):
            renamed.append(normalize_value(Expr(v.value.rename(mapping))))
        else:
            renamed.append(v)
    excluded: list[tuple[str, Fraction]] = []
    seen = set()
    for v in renamed:
        if not isinstance(v, Expr):
            continue
        den_vars = set()
        for a, _e in v.value.den:
            den_vars |= mp_vars(_thaw(a))
        if len(den_vars) != 1:
            continue  # multivariate pole locus: handled at evaluation time
        name = next(iter(den_vars))
        rf = None
        try:
            rf = mfrac_to_ratfunc(v.value)
        except ValueError:
            den = v.value.expand_den()
            coeffs = [ZERO] * (mp_total_degree(den) + 1)
            for m, c in den.items():
                coeffs[m[0][1] if m else 0] = c
            rf_den = Polynomial.of(name, coeffs)
            for root in rational_roots(rf_den):
                if (name, root) not in seen:
                    seen.add((name, root))
                    excluded.append((name, root))
            continue
        if rf.den.degree > 0:
            for root in rational_roots(rf.den):
                if (name, root) not in seen:
                    seen.add((name, root))
                    excluded.append((name, root))
    free = tuple(mapping[p] for p in order)
    return SolutionFamily(
        identity_name,
        Fraction(weight) if weight is not None else None,
        degree,
        n,
        tuple(renamed),
        free,
        tuple(excluded),
        label,
    )


def instantiate(family: SolutionFamily, values: dict[str, Fraction]) -> tuple[Fraction, ...]:
    """Concrete psi vector at a parameter point; PoleError off the domain."""
    point = {k: Fraction(v) for k, v in values.items()}
    out = []
    for v in family.assignment:
        if isinstance(v, Zero):
            out.append(ZERO)
        elif isinstance(v, FreeParam):
            out.append(point[v.name])
        else:
            out.append(v.value.evaluate(point))
    return tuple(out)


def specialize(family: SolutionFamily, partial: dict[str, Fraction]) -> SolutionFamily:
    """Pin some parameters to rational values and re-canonicalize."""
    partial = {k: Fraction(v) for k, v in partial.items()}
    values: list[SymValue] = []
    for v in family.assignment:
        if isinstance(v, FreeParam) and v.name in partial:
            values.append(normalize_value(Expr(MFrac.const(partial[v.name]))))
        elif isinstance(v, Expr):
            values.append(normalize_value(Expr(v.value.substitute_scalar(partial))))
        else:
            values.append(v)
    return make_family(
        family.identity_name,
        family.weight,
        family.degree,
        family.n,
        values,
        family.label,
    )


def family_key(family: SolutionFamily) -> tuple:
    """Structural key used for exact deduplication."""
    return (
        family.identity_name,
        family.weight,
        family.degree,
        family.n,
        tuple(
            (type(v).__name__, v.name if isinstance(v, FreeParam) else None,
             (v.value if isinstance(v, Expr) else None))
            for v in family.assignment
        ),
    )
