"""Closed-form constructors for every classified operator family.

Each constructor returns an operator that passes the matching identity check;
singular parameter values (denominators that vanish at some basis index) are
rejected with SingularParameterError rather than silently producing a wrong
operator.  Degree-1 constructors zero the top index psi(n): the identity
forces it for every one of these families even where a case formula does not
restate it.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .algebra import AlgebraElement, power
from .errors import ParameterError, SingularParameterError
from .operators import HomogeneousOperator, MatrixOperator

ZERO = Fraction(0)


@dataclass(frozen=True)
class FamilyParams:
    """Descriptor for one constructor call: variant label plus named scalars.

    Scalar-valued entries live in params; vector-valued ones (alpha,
    psi_head) in vectors.  build_family dispatches on (identity, weight,
    degree, case).
    """

    n: int
    variant: str
    params: dict = field(default_factory=dict)
    vectors: dict = field(default_factory=dict)


def _floor_half(n: int) -> int:
    return n // 2


# -- derivations, homomorphisms, weight-1 differentials ------------------------


def derivation_family(n: int, alpha) -> MatrixOperator:
    """D(e_k) = k * sum_i alpha_i e_{k-1+i}: the general derivation.

    A derivation is determined by D(e_1) = sum alpha_i e_i; the product rule
    then forces D(e_k) = k e_{k-1} D(e_1).
    """
    avec = _scalars(alpha, n, "alpha")
    cols = []
    for k in range(1, n + 1):
        col = [ZERO] * n
        for i in range(1, n - k + 2):
            col[k - 1 + i - 1] += k * avec[i - 1]
        cols.append(col)
    return MatrixOperator.from_columns(n, cols)


def homomorphism_family(n: int, alpha) -> MatrixOperator:
    """phi(e_1) = sum alpha_i e_i and phi(e_k) = phi(e_1)^k.

    The k-th image is computed by in-algebra power expansion, which is what
    multiplicativity on the one-generated algebra forces.
    """
    avec = _scalars(alpha, n, "alpha")
    image1 = AlgebraElement.of(n, avec)
    cols = []
    current = image1
    for k in range(1, n + 1):
        if k > 1:
            current = power(image1, k)
        cols.append(list(current.coeffs))
    return MatrixOperator.from_columns(n, cols)


def differential1_family(n: int, alpha) -> MatrixOperator:
    """Weight-1 differential operator: the homomorphism family minus id.

    d is a weight-1 differential operator exactly when d + id is a
    homomorphism, so the general solution is phi - id.
    """
    return homomorphism_family(n, alpha) - MatrixOperator.identity(n)


# -- Rota-Baxter weight 0 -------------------------------------------------------


def rb0_deg0(n: int, t: int, v) -> HomogeneousOperator:
    """Degree-0 weight-0 Rota-Baxter family: psi(i) = t*v/i on multiples of t."""
    v = Fraction(v)
    if not 1 <= t <= _floor_half(n):
        raise ParameterError(f"t={t} outside 1..{_floor_half(n)}")
    if v == 0:
        raise ParameterError("v must be nonzero; the zero operator is the v=0 limit")
    psi = [ZERO] * n
    for i in range(t, n + 1, t):
        psi[i - 1] = Fraction(t, i) * v
    return HomogeneousOperator.of(n, 0, psi)


def rb0_deg0_spike(n: int, r: int, v) -> HomogeneousOperator:
    """Single spike psi(r) = v for r above n/2; all products vanish."""
    if not _floor_half(n) < r <= n:
        raise ParameterError(f"r={r} outside {_floor_half(n) + 1}..{n}")
    psi = [ZERO] * n
    psi[r - 1] = Fraction(v)
    return HomogeneousOperator.of(n, 0, psi)


def rb0_deg1(n: int, case: str, **params) -> HomogeneousOperator:
    """Degree-1 weight-0 Rota-Baxter families.

    case a: psi(i) = 2*psi1/(i+1) for i <= n-1       (psi1, psi2 nonzero)
    case b: same formula on odd i <= n-1, else 0     (psi2 = 0)
    case c: psi(i) = (t+1)*v/(i+1) on i+1 = 0 mod t+1, i <= n-1
    case d: two free spikes psi(r), psi(r+1) above the constrained range
    """
    if case == "a":
        v = _nonzero(_param(params, "psi1"), "psi1")
        psi = [2 * v / (i + 1) for i in range(1, n)] + [ZERO]
        return HomogeneousOperator.of(n, 1, psi)
    if case == "b":
        v = _nonzero(_param(params, "psi1"), "psi1")
        psi = [2 * v / (i + 1) if i % 2 == 1 and i <= n - 1 else ZERO for i in range(1, n + 1)]
        return HomogeneousOperator.of(n, 1, psi)
    if case == "c":
        return _mod_support_deg1(n, params, scale_by_index=True)
    if case == "d":
        return _double_spike_deg1(n, params, max_r=n - 2)
    raise ParameterError(f"unknown case {case!r}")


def rb0_degk(n: int, k: int, psi_head) -> HomogeneousOperator:
    """Degree k >= floor(n/2): arbitrary psi on 1..n-k, zero above."""
    return _arbitrary_head(n, k, psi_head)


# -- Rota-Baxter weight 1 -------------------------------------------------------


def rb1_deg0(n: int, a) -> HomogeneousOperator:
    """Degree-0 weight-1 Rota-Baxter family: psi(s) = a^s/((a+1)^s - a^s).

    Over the rationals the denominator vanishes only at a = -1/2 (for any
    even s), which is rejected for n >= 2.
    """
    a = Fraction(a)
    psi = []
    for s in range(1, n + 1):
        den = (a + 1) ** s - a**s
        if den == 0:
            raise SingularParameterError(s, "a", a)
        psi.append(a**s / den)
    return HomogeneousOperator.of(n, 0, psi)


def rb1_degk(n: int, k: int, v) -> HomogeneousOperator:
    """Positive-degree weight-1 Rota-Baxter operators.

    Below floor(n/2) only the zero operator exists (regardless of v); from
    floor(n/2) on, psi(1) is free and everything else vanishes.
    """
    if k < 1:
        raise ParameterError("k must be >= 1")
    if k > n - 1:
        raise ParameterError(f"degree {k} outside 1..{n - 1}")
    psi = [ZERO] * n
    if k >= _floor_half(n):
        psi[0] = Fraction(v)
    return HomogeneousOperator.of(n, k, psi)


# -- Reynolds -------------------------------------------------------------------


def reynolds_deg0(n: int, t: int, v) -> HomogeneousOperator:
    """Degree-0 Reynolds family: psi(i*t) = v/(i - (i-1)v) on multiples of t.

    v = i/(i-1) makes the chain denominator vanish at index i*t and is
    rejected with the offending index.
    """
    v = Fraction(v)
    if not 1 <= t <= _floor_half(n):
        raise ParameterError(f"t={t} outside 1..{_floor_half(n)}")
    if v == 0:
        raise ParameterError("v must be nonzero; the zero operator is the v=0 limit")
    psi = [ZERO] * n
    for i in range(1, n // t + 1):
        den = i - (i - 1) * v
        if den == 0:
            raise SingularParameterError(i * t, "v", v)
        psi[i * t - 1] = v / den
    return HomogeneousOperator.of(n, 0, psi)


def reynolds_deg0_spike(n: int, r: int, v) -> HomogeneousOperator:
    if not _floor_half(n) < r <= n:
        raise ParameterError(f"r={r} outside {_floor_half(n) + 1}..{n}")
    psi = [ZERO] * n
    psi[r - 1] = Fraction(v)
    return HomogeneousOperator.of(n, 0, psi)


def reynolds_deg1(n: int, case: str, **params) -> HomogeneousOperator:
    """Degree-1 Reynolds families.

    case a: psi(i) = (t+1)*v/(i+1) on i+1 = 0 mod t+1, i <= n-1, t from 1
    case b: two free spikes psi(r), psi(r+1), r <= n-2
    """
    if case == "a":
        return _mod_support_deg1(n, params, scale_by_index=True, min_t=1)
    if case == "b":
        return _double_spike_deg1(n, params, max_r=n - 2)
    raise ParameterError(f"unknown case {case!r}")


def reynolds_degk(n: int, k: int, psi_head) -> HomogeneousOperator:
    return _arbitrary_head(n, k, psi_head)


# -- Nijenhuis ------------------------------------------------------------------


def nijenhuis_deg0(n: int, a) -> HomogeneousOperator:
    """Degree-0 Nijenhuis operators are the scalar multiples of the identity."""
    return HomogeneousOperator.of(n, 0, [Fraction(a)] * n)


def nijenhuis_deg1(n: int, case: str, **params) -> HomogeneousOperator:
    """Degree-1 Nijenhuis families.

    case a: seeds psi(1) != 0 and psi(2) free, then for 3 <= i <= n-1 the
            recurrence psi(i) = psi(1)psi(i-2)/(psi(1)+psi(i-2)-psi(i-1));
            a vanishing recurrence denominator is a singular parameter set
    case b: psi(i) = (t+1)*v/(i+1) on i+1 = 0 mod t+1, t >= 2
    case c: one free spike psi(r), r <= n-1
    """
    if case == "a":
        if n < 3:
            raise ParameterError("case a needs n >= 3; lower n is spike-only")
        s1 = _param(params, "psi1")
        s2 = _param(params, "psi2")
        if s1 == 0:
            raise ParameterError("case a requires psi1 != 0")
        psi = [s1, s2]
        for i in range(3, n):
            den = s1 + psi[i - 3] - psi[i - 2]
            if den == 0:
                raise SingularParameterError(i, "psi2", s2)
            psi.append(s1 * psi[i - 3] / den)
        psi.append(ZERO)
        return HomogeneousOperator.of(n, 1, psi[:n])
    if case == "b":
        return _mod_support_deg1(n, params, scale_by_index=True)
    if case == "c":
        r = _int_param(params, "r")
        if not _floor_half(n - 2) < r <= n - 1:
            raise ParameterError(f"r={r} outside {_floor_half(n - 2) + 1}..{n - 1}")
        psi = [ZERO] * n
        psi[r - 1] = _param(params, "v")
        return HomogeneousOperator.of(n, 1, psi)
    raise ParameterError(f"unknown case {case!r}")


def nijenhuis_degk(n: int, k: int, psi_head) -> HomogeneousOperator:
    return _arbitrary_head(n, k, psi_head)


# -- average --------------------------------------------------------------------


def average_deg0(n: int, t: int, v) -> HomogeneousOperator:
    """Degree-0 average family: psi constant v on multiples of t."""
    v = Fraction(v)
    if not 1 <= t <= _floor_half(n):
        raise ParameterError(f"t={t} outside 1..{_floor_half(n)}")
    if v == 0:
        raise ParameterError("v must be nonzero; the zero operator is the v=0 limit")
    psi = [ZERO] * n
    for i in range(t, n + 1, t):
        psi[i - 1] = v
    return HomogeneousOperator.of(n, 0, psi)


def average_deg0_spike(n: int, r: int, v) -> HomogeneousOperator:
    if not _floor_half(n) < r <= n:
        raise ParameterError(f"r={r} outside {_floor_half(n) + 1}..{n}")
    psi = [ZERO] * n
    psi[r - 1] = Fraction(v)
    return HomogeneousOperator.of(n, 0, psi)


def average_deg1(n: int, case: str, **params) -> HomogeneousOperator:
    """Degree-1 average families.

    case a: psi(i) = v for all i <= n-1
    case b: psi(i) = v on odd i <= n-1
    case c: psi(i) = v on i+1 = 0 mod t+1, i <= n-1 (constant, t >= 2)
    case d: spikes psi(r) = v1 and psi(r+1) = v2 (v2 only when r+1 <= n-1)
    """
    if case == "a":
        v = _nonzero(_param(params, "v"), "v")
        return HomogeneousOperator.of(n, 1, [v] * (n - 1) + [ZERO])
    if case == "b":
        v = _nonzero(_param(params, "v"), "v")
        psi = [v if i % 2 == 1 and i <= n - 1 else ZERO for i in range(1, n + 1)]
        return HomogeneousOperator.of(n, 1, psi)
    if case == "c":
        return _mod_support_deg1(n, params, scale_by_index=False)
    if case == "d":
        return _double_spike_deg1(n, params, max_r=n - 1)
    raise ParameterError(f"unknown case {case!r}")


def average_degk(n: int, k: int, psi_head) -> HomogeneousOperator:
    return _arbitrary_head(n, k, psi_head)


# -- shared helpers -------------------------------------------------------------


def _scalars(values, n: int, name: str) -> list[Fraction]:
    out = [Fraction(v) for v in values]
    if len(out) != n:
        raise ParameterError(f"{name} must have length {n}, got {len(out)}")
    return out


def _param(params: dict, key: str) -> Fraction:
    if key not in params:
        raise ParameterError(f"missing parameter {key!r}")
    return Fraction(params[key])


def _nonzero(value: Fraction, name: str) -> Fraction:
    if value == 0:
        raise ParameterError(f"{name} must be nonzero for this case")
    return value


def _int_param(params: dict, key: str) -> int:
    if key not in params:
        raise ParameterError(f"missing parameter {key!r}")
    value = params[key]
    if isinstance(value, Fraction):
        if value.denominator != 1:
            raise ParameterError(f"{key} must be an integer")
        return int(value)
    return int(value)


def _mod_support_deg1(
    n: int, params: dict, scale_by_index: bool, min_t: int = 2
) -> HomogeneousOperator:
    """Support on i with i+1 = 0 mod (t+1), up to i = n-1.

    With scale_by_index the value at i is (t+1)*v/(i+1) (Rota-Baxter,
    Reynolds, Nijenhuis shape); otherwise it is the constant v (average).
    """
    t = _int_param(params, "t")
    v = _param(params, "v")
    if not min_t <= t <= _floor_half(n - 2):
        raise ParameterError(f"t={t} outside {min_t}..{_floor_half(n - 2)}")
    if v == 0:
        raise ParameterError("v must be nonzero; the zero operator is the v=0 limit")
    psi = [ZERO] * n
    for i in range(t, n, t + 1):
        if (i + 1) % (t + 1) == 0 and i <= n - 1:
            psi[i - 1] = (t + 1) * v / (i + 1) if scale_by_index else v
    return HomogeneousOperator.of(n, 1, psi)


def _double_spike_deg1(n: int, params: dict, max_r: int) -> HomogeneousOperator:
    r = _int_param(params, "r")
    if not _floor_half(n - 2) < r <= max_r:
        raise ParameterError(f"r={r} outside {_floor_half(n - 2) + 1}..{max_r}")
    v1 = _param(params, "v1")
    v2 = Fraction(params["v2"]) if "v2" in params else ZERO
    psi = [ZERO] * n
    psi[r - 1] = v1
    if r + 1 <= n - 1:
        psi[r] = v2
    elif v2 != 0:
        raise ParameterError(f"psi({r + 1}) is forced to zero at r={r}")
    return HomogeneousOperator.of(n, 1, psi)


def _arbitrary_head(n: int, k: int, psi_head) -> HomogeneousOperator:
    if k < _floor_half(n):
        raise ParameterError(
            f"degree {k} below floor(n/2)={_floor_half(n)}: arbitrary psi does not hold there"
        )
    if k > n - 1:
        raise ParameterError(f"degree {k} outside {_floor_half(n)}..{n - 1}")
    head = [Fraction(v) for v in psi_head]
    if len(head) != n - k:
        raise ParameterError(f"psi_head must have length n-k={n - k}, got {len(head)}")
    return HomogeneousOperator.of(n, k, head + [ZERO] * k)


# -- descriptor dispatch --------------------------------------------------------


def build_family(fp: FamilyParams):
    """Construct the operator described by a FamilyParams descriptor."""
    builders = {
        "derivation": lambda: derivation_family(fp.n, fp.vectors["alpha"]),
        "homomorphism": lambda: homomorphism_family(fp.n, fp.vectors["alpha"]),
        "differential1": lambda: differential1_family(fp.n, fp.vectors["alpha"]),
        "rb0-deg0-a": lambda: rb0_deg0(fp.n, _int_param(fp.params, "t"), _param(fp.params, "v")),
        "rb0-deg0-b": lambda: rb0_deg0_spike(
            fp.n, _int_param(fp.params, "r"), _param(fp.params, "v")
        ),
        "rb0-deg1-a": lambda: rb0_deg1(fp.n, "a", **fp.params),
        "rb0-deg1-b": lambda: rb0_deg1(fp.n, "b", **fp.params),
        "rb0-deg1-c": lambda: rb0_deg1(fp.n, "c", **fp.params),
        "rb0-deg1-d": lambda: rb0_deg1(fp.n, "d", **fp.params),
        "rb0-degk": lambda: rb0_degk(fp.n, _int_param(fp.params, "k"), fp.vectors["psi_head"]),
        "rb1-deg0": lambda: rb1_deg0(fp.n, _param(fp.params, "a")),
        "rb1-degk": lambda: rb1_degk(
            fp.n, _int_param(fp.params, "k"), _param(fp.params, "v")
        ),
        "reynolds-deg0-a": lambda: reynolds_deg0(
            fp.n, _int_param(fp.params, "t"), _param(fp.params, "v")
        ),
        "reynolds-deg0-b": lambda: reynolds_deg0_spike(
            fp.n, _int_param(fp.params, "r"), _param(fp.params, "v")
        ),
        "reynolds-deg1-a": lambda: reynolds_deg1(fp.n, "a", **fp.params),
        "reynolds-deg1-b": lambda: reynolds_deg1(fp.n, "b", **fp.params),
        "reynolds-degk": lambda: reynolds_degk(
            fp.n, _int_param(fp.params, "k"), fp.vectors["psi_head"]
        ),
        "nijenhuis-deg0": lambda: nijenhuis_deg0(fp.n, _param(fp.params, "a")),
        "nijenhuis-deg1-a": lambda: nijenhuis_deg1(fp.n, "a", **fp.params),
        "nijenhuis-deg1-b": lambda: nijenhuis_deg1(fp.n, "b", **fp.params),
        "nijenhuis-deg1-c": lambda: nijenhuis_deg1(fp.n, "c", **fp.params),
        "nijenhuis-degk": lambda: nijenhuis_degk(
            fp.n, _int_param(fp.params, "k"), fp.vectors["psi_head"]
        ),
        "average-deg0-a": lambda: average_deg0(
            fp.n, _int_param(fp.params, "t"), _param(fp.params, "v")
        ),
        "average-deg0-b": lambda: average_deg0_spike(
            fp.n, _int_param(fp.params, "r"), _param(fp.params, "v")
        ),
        "average-deg1-a": lambda: average_deg1(fp.n, "a", **fp.params),
        "average-deg1-b": lambda: average_deg1(fp.n, "b", **fp.params),
        "average-deg1-c": lambda: average_deg1(fp.n, "c", **fp.params),
        "average-deg1-d": lambda: average_deg1(fp.n, "d", **fp.params),
        "average-degk": lambda: average_degk(
            fp.n, _int_param(fp.params, "k"), fp.vectors["psi_head"]
        ),
    }
    if fp.variant not in builders:
        raise ParameterError(f"unknown family variant {fp.variant!r}")
    return builders[fp.variant]()
