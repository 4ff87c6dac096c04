"""Branch-and-propagate classification of homogeneous operator families.

classify() re-derives, for one identity and degree, every maximal solution
family of the weight-function constraint system produced by
reduce_to_psi_equations.  Walking indices 1..n in order, each psi(i) is

* pinned, when some constraint involves only psi(i) beyond what is already
  decided (solved exactly over the symbolic fraction field; the pinning
  equations are linear or have square discriminant),
* or branched, Zero versus a fresh free parameter, when unconstrained.

Constraints that collapse to a relation between parameters eliminate the
latest parameter they mention (its zero root is discarded: that branch is
covered by the Zero sibling).  Inconsistent branches are pruned; families
that are zero-specializations of other families are merged away.  All
decisions are exact polynomial arithmetic; no step is probabilistic.

verify_equality compares families by randomized evaluation with an explicit
false-equal probability bound; verify_completeness matches solver output
against the symbolic form of the closed-form constructor families and
reports the bijection, with any divergence flagged as a finding.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import (
    DivisionByZeroError,
    ParameterError,
    PoleError,
    UnclassifiedRegimeError,
)
from .operators import (
    HomogeneousOperator,
    IdentityKind,
    check_identity,
    hom_to_matrix,
    reduce_to_psi_equations,
)
from .symbolic import (
    Expr,
    FreeParam,
    MFRAC_ZERO,
    MFrac,
    SolutionFamily,
    SymValue,
    Zero,
    ZERO_VALUE,
    as_mfrac,
    family_key,
    instantiate,
    make_family,
    mp_coeffs_in,
    mp_is_zero,
    mp_scale,
    mp_vars,
    normalize_value,
    specialize,
)

ZERO = Fraction(0)
_SAMPLE_BOUND = 10**6


def classified_regime(kind: IdentityKind, degree: int, n: int) -> bool:
    """Regimes with a complete classification.

    Degrees 0 and 1 and every degree at or above floor(n/2) are classified
    for all five identities; nonzero-weight Rota-Baxter is classified at
    every degree (the remaining degrees only admit the zero operator).
    """
    if not 0 <= degree <= n - 1:
        return False
    if kind.name == "rota-baxter" and kind.weight != 0:
        return True
    return degree <= 1 or degree >= n // 2


def classify(kind: IdentityKind, degree: int, n: int) -> list[SolutionFamily]:
    """Complete, duplicate-free list of maximal solution families."""
    if n < 1:
        raise ParameterError("n must be >= 1")
    if not 0 <= degree <= n - 1:
        raise ParameterError(f"degree {degree} outside 0..{n - 1}")
    if not classified_regime(kind, degree, n):
        raise UnclassifiedRegimeError(
            f"unclassified regime: {kind.describe()} degree {degree} at n={n}"
        )
    return classify_unchecked(kind, degree, n)


def classify_unchecked(kind: IdentityKind, degree: int, n: int) -> list[SolutionFamily]:
    """Branch enumeration without the classified-regime gate.

    Exposed for empirical exploration of open regimes; the result is a
    correct solution list for the constraint system, but carries no
    completeness claim from any theorem.
    """
    constraints = [c.poly for c in reduce_to_psi_equations(kind, n, degree)]
    out: list[SolutionFamily] = []
    state = _Branch([None] * n, [], 0)
    _explore(constraints, state, out, kind, degree, n)
    return merge_families(out)


@dataclass
class _Branch:
    """Mutable exploration state: decided prefix, live parameters."""

    assign: list[SymValue | None]
    params: list[str]
    introduced: int

    def fork(self) -> "_Branch":
        return _Branch(list(self.assign), list(self.params), self.introduced)


def _residual(poly, assign) -> dict[tuple[int, ...], MFrac]:
    """Substitute decided values; keys are monomials in undecided indices."""
    out: dict[tuple[int, ...], MFrac] = {}
    for mono, coeff in poly.terms.items():
        val = MFrac.const(coeff)
        undecided: list[int] = []
        dead = False
        for i in mono:
            sv = assign[i - 1]
            if sv is None:
                undecided.append(i)
            elif isinstance(sv, Zero):
                dead = True
                break
            else:
                val = val * as_mfrac(sv)
        if dead or val.is_zero:
            continue
        key = tuple(undecided)
        acc = out.get(key, MFRAC_ZERO) + val
        if acc.is_zero:
            out.pop(key, None)
        else:
            out[key] = acc
    return out


def _solve_univariate(c0: MFrac, c1: MFrac, c2: MFrac) -> list[MFrac]:
    """Roots of c2 u^2 + c1 u + c0 over the symbolic fraction field."""
    if c2.is_zero:
        return [(-c0) / c1]
    disc = c1 * c1 - MFrac.const(4) * c2 * c0
    if disc.is_zero:
        return [(-c1) / (MFrac.const(2) * c2)]
    root = disc.sqrt()
    if root is None:
        raise UnclassifiedRegimeError(
            "pinning constraint has non-square discriminant; cannot split exactly"
        )
    two_c2 = MFrac.const(2) * c2
    r1 = ((-c1) + root) / two_c2
    r2 = ((-c1) - root) / two_c2
    return [r1] if r1.equals(r2) else [r1, r2]


def _param_roots(value: MFrac, params: list[str]) -> tuple[str, list[MFrac]] | None:
    """Solve a parameter-only constraint for its latest parameter.

    The constraint is value = 0 with value a nonzero fraction in the live
    parameters.  Zero roots of the chosen parameter are dropped: solutions
    with that parameter equal to zero belong to the sibling Zero branch.
    Returns None when no live parameter occurs (hard contradiction).
    """
    num = mp_scale(value.expand_num(), value.unit)
    present = mp_vars(num)
    target = None
    for name in reversed(params):
        if name in present:
            target = name
            break
    if target is None:
        return None
    by_exp = mp_coeffs_in(num, target)
    kmin = min(by_exp)
    shifted = {e - kmin: p for e, p in by_exp.items()}
    degree = max(shifted)
    if degree == 0:
        # value = target^kmin * c(other params); recurse on c
        rest = MFrac.from_polys(shifted[0], {(): Fraction(1)})
        return _param_roots(rest, [p for p in params if p != target])
    coeffs = [
        MFrac.from_polys(shifted.get(e, {}), {(): Fraction(1)}) for e in range(degree + 1)
    ]
    if degree == 1:
        roots = [(-coeffs[0]) / coeffs[1]]
    elif degree == 2:
        roots = _solve_univariate(coeffs[0], coeffs[1], coeffs[2])
    else:
        raise UnclassifiedRegimeError(
            f"parameter constraint of degree {degree}; cannot eliminate exactly"
        )
    roots = [r for r in roots if not r.is_zero]
    if not roots:
        return None
    return target, roots


def _substitute_param(state: _Branch, name: str, value: MFrac) -> bool:
    """Replace a live parameter by an expression; False when a pole appears."""
    new_assign: list[SymValue | None] = []
    for sv in state.assign:
        if sv is None or isinstance(sv, Zero):
            new_assign.append(sv)
        elif isinstance(sv, FreeParam):
            if sv.name == name:
                new_assign.append(normalize_value(Expr(value)))
            else:
                new_assign.append(sv)
        else:
            try:
                new_assign.append(normalize_value(Expr(sv.value.substitute_var(name, value))))
            except DivisionByZeroError:
                return False
    state.assign = new_assign
    state.params = [p for p in state.params if p != name]
    return True


def _explore(constraints, state: _Branch, out, kind, degree, n) -> None:
    while True:
        residuals = [_residual(p, state.assign) for p in constraints]

        # parameter-only constraints: eliminate or prune
        acted = False
        for r in residuals:
            if not r:
                continue
            if set(r) == {()}:
                solved = _param_roots(r[()], state.params)
                if solved is None:
                    return  # contradiction
                name, roots = solved
                if len(roots) == 1:
                    if not _substitute_param(state, name, roots[0]):
                        return
                    acted = True
                    break
                for root in roots:
                    sub = state.fork()
                    if _substitute_param(sub, name, root):
                        _explore(constraints, sub, out, kind, degree, n)
                return
        if acted:
            continue

        idx = next(
            (i for i in range(1, n + 1) if state.assign[i - 1] is None), None
        )
        if idx is None:
            out.append(_emit(state, kind, degree, n))
            return

        # look for a constraint pinning psi(idx)
        pin = None
        for r in residuals:
            if not r:
                continue
            keys = set(r)
            if keys <= {(), (idx,), (idx, idx)} and keys & {(idx,), (idx, idx)}:
                pin = r
                break
        if pin is not None:
            roots = _solve_univariate(
                pin.get((), MFRAC_ZERO),
                pin.get((idx,), MFRAC_ZERO),
                pin.get((idx, idx), MFRAC_ZERO),
            )
            if len(roots) == 1:
                state.assign[idx - 1] = normalize_value(Expr(roots[0]))
                continue
            for root in roots:
                sub = state.fork()
                sub.assign[idx - 1] = normalize_value(Expr(root))
                _explore(constraints, sub, out, kind, degree, n)
            return

        # undetermined: free parameter first (matches family numbering), then zero
        name = f"p{state.introduced + 1}"
        free = state.fork()
        free.introduced += 1
        free.assign[idx - 1] = FreeParam(name)
        free.params.append(name)
        _explore(constraints, free, out, kind, degree, n)

        zero = state.fork()
        zero.introduced += 1
        zero.assign[idx - 1] = ZERO_VALUE
        _explore(constraints, zero, out, kind, degree, n)
        return


def _emit(state: _Branch, kind, degree, n) -> SolutionFamily:
    values = [v if v is not None else ZERO_VALUE for v in state.assign]
    fam = make_family(kind.name, kind.weight, degree, n, values)
    support = fam.support
    label = "zero" if not support else "support " + ",".join(map(str, support))
    return SolutionFamily(
        fam.identity_name,
        fam.weight,
        fam.degree,
        fam.n,
        fam.assignment,
        fam.free_params,
        fam.excluded_points,
        label,
    )


# -- merging --------------------------------------------------------------------


def subsumed_by(f: SolutionFamily, g: SolutionFamily) -> bool:
    """True when f is g with some of g's free parameters set to zero."""
    if (f.degree, f.n) != (g.degree, g.n):
        return False
    to_zero = set()
    for fv, gv in zip(f.assignment, g.assignment):
        if isinstance(fv, Zero) and isinstance(gv, FreeParam):
            to_zero.add(gv.name)
    try:
        g2 = specialize(g, {p: ZERO for p in to_zero})
    except (PoleError, DivisionByZeroError):
        return False
    if len(g2.free_params) != len(f.free_params):
        return False
    for a, b in zip(g2.assignment, f.assignment):
        if isinstance(a, Zero) != isinstance(b, Zero):
            return False
        if isinstance(a, Zero):
            continue
        if not as_mfrac(a).equals(as_mfrac(b)):
            return False
    return True


def merge_families(families: list[SolutionFamily]) -> list[SolutionFamily]:
    """Drop duplicates and zero-specializations, preserving branch order."""
    unique: list[SolutionFamily] = []
    seen = set()
    for fam in families:
        key = family_key(fam)
        if key not in seen:
            seen.add(key)
            unique.append(fam)
    kept: list[SolutionFamily] = []
    for i, fam in enumerate(unique):
        drop = False
        for j, other in enumerate(unique):
            if i == j:
                continue
            if subsumed_by(fam, other):
                if subsumed_by(other, fam) and i < j:
                    continue  # extensionally equal: keep the earlier
                drop = True
                break
        if not drop:
            kept.append(fam)
    return kept


# -- sampling and spot verification ----------------------------------------------


def _draw_point(
    family: SolutionFamily, rng: random.Random, avoid_zero: bool = True
) -> dict[str, Fraction]:
    banned = {}
    for name, point in family.excluded_points:
        banned.setdefault(name, set()).add(point)
    values: dict[str, Fraction] = {}
    for name in family.free_params:
        for _ in range(200):
            v = Fraction(rng.randint(-_SAMPLE_BOUND, _SAMPLE_BOUND), rng.randint(1, _SAMPLE_BOUND))
            if avoid_zero and v == 0:
                continue
            if v in banned.get(name, ()):
                continue
            values[name] = v
            break
        else:
            raise RuntimeError("could not sample a valid parameter point")
    return values


def sample_psi(
    family: SolutionFamily, rng: random.Random, tries: int = 50
) -> tuple[dict[str, Fraction], tuple[Fraction, ...]]:
    """Random non-excluded parameter point and its concrete psi vector."""
    for _ in range(tries):
        values = _draw_point(family, rng)
        try:
            return values, instantiate(family, values)
        except PoleError:
            continue
    raise RuntimeError("could not instantiate family off its pole locus")


def spot_verify(family: SolutionFamily, trials: int, rng: random.Random) -> bool:
    """Exact identity check of random specializations of a family."""
    kind = IdentityKind(family.identity_name, family.weight)
    for _ in range(trials):
        _, psi = sample_psi(family, rng)
        op = hom_to_matrix(HomogeneousOperator.of(family.n, family.degree, psi))
        if not check_identity(kind, op).passed:
            return False
    return True


# -- randomized family comparison -------------------------------------------------


@dataclass(frozen=True)
class EqualityReport:
    equal: bool
    reason: str
    trials: int
    false_equal_bound: Fraction | None = None
    witness: tuple | None = None


def _family_degree_bound(family: SolutionFamily) -> int:
    total = 1
    for v in family.assignment:
        if isinstance(v, Expr):
            total = max(total, v.value.degree_bound())
    return total


def trials_for_bound(per_trial: Fraction, target: Fraction) -> int:
    """Smallest trial count whose false-equal bound is at most target."""
    per_trial = min(per_trial, Fraction(999, 1000))
    bound = Fraction(1)
    trials = 0
    while bound > target:
        bound *= per_trial
        trials += 1
    return trials


def verify_equality(
    lhs: SolutionFamily,
    rhs: SolutionFamily,
    trials: int | None = None,
    rng: random.Random | None = None,
    bound_target: Fraction = Fraction(1, 10**9),
) -> EqualityReport:
    """Randomized extensional equality with an explicit soundness bound.

    Parameters are aligned by order.  A difference is certain (exact
    arithmetic); equality is probabilistic with false-equal probability at
    most the reported bound, from the degree of the compared rational
    functions and the sample space of the drawn points.
    """
    if (lhs.degree, lhs.n) != (rhs.degree, rhs.n):
        return EqualityReport(False, "structural: degree or dimension differ", 0)
    if len(lhs.free_params) != len(rhs.free_params):
        return EqualityReport(False, "structural: parameter count differs", 0)
    rng = rng or random.Random(20250810)
    deg = max(_family_degree_bound(lhs), _family_degree_bound(rhs))
    per_trial = Fraction(2 * deg, 2 * _SAMPLE_BOUND + 1)
    if trials is None:
        trials = max(2, trials_for_bound(per_trial, bound_target))
    merged_excluded = lhs.excluded_points + rhs.excluded_points
    probe = SolutionFamily(
        lhs.identity_name, lhs.weight, lhs.degree, lhs.n,
        lhs.assignment, lhs.free_params, merged_excluded,
    )
    done = 0
    while done < trials:
        values = _draw_point(probe, rng)
        try:
            va = instantiate(lhs, dict(zip(lhs.free_params, [values[p] for p in probe.free_params])))
            vb = instantiate(rhs, dict(zip(rhs.free_params, [values[p] for p in probe.free_params])))
        except PoleError:
            continue
        if va != vb:
            i = next(k for k, (x, y) in enumerate(zip(va, vb), start=1) if x != y)
            return EqualityReport(False, "witness point", done + 1, None, (values, i, va[i - 1], vb[i - 1]))
        done += 1
    return EqualityReport(True, "randomized", trials, min(Fraction(1), per_trial**trials))


# -- symbolic constructor families -------------------------------------------------


def _const_mul(c, name="a") -> SymValue:
    return normalize_value(Expr(MFrac.var(name) * MFrac.const(c)))


def theorem_families(kind: IdentityKind, degree: int, n: int) -> list[SolutionFamily]:
    """Symbolic form of every closed-form constructor family (pre-merge).

    These mirror the families module exactly; a test pins instantiations of
    each symbolic family to the constructor output.
    """
    name, w = kind.name, kind.weight
    half = n // 2
    fams: list[SolutionFamily] = []

    def mk(values, label):
        fams.append(make_family(name, w, degree, n, list(values), label))

    def zeros():
        return [ZERO_VALUE] * n

    a = MFrac.var("a")
    if name == "rota-baxter" and w != 0:
        if degree == 0:
            values = []
            for s in range(1, n + 1):
                num = _pow(a, s) * MFrac.const(w)
                den = _pow(a + MFrac.const(w), s) - _pow(a, s)
                values.append(normalize_value(Expr(num / den)))
            mk(values, "deg0 chain")
        elif degree < half:
            mk(zeros(), "zero only")
        else:
            vals = zeros()
            vals[0] = FreeParam("a")
            mk(vals, "head spike")
        return fams

    if degree == 0:
        if name == "nijenhuis":
            mk([FreeParam("a")] * n, "constant")
            return fams
        for t in range(1, half + 1):
            vals = zeros()
            for i in range(1, n // t + 1):
                if name == "rota-baxter":
                    vals[i * t - 1] = _const_mul(Fraction(1, i))
                elif name == "average":
                    vals[i * t - 1] = FreeParam("a")
                else:  # reynolds
                    den = MFrac.const(i) - MFrac.const(i - 1) * a
                    vals[i * t - 1] = normalize_value(Expr(a / den))
            mk(vals, f"deg0 case a t={t}")
        for r in range(half + 1, n + 1):
            vals = zeros()
            vals[r - 1] = FreeParam("a")
            mk(vals, f"deg0 case b r={r}")
        return fams

    if degree == 1:
        half2 = (n - 2) // 2
        if name in ("rota-baxter", "average"):
            # all-index family and odd-index family
            vals = zeros()
            for i in range(1, n):
                vals[i - 1] = (
                    _const_mul(Fraction(2, i + 1)) if name == "rota-baxter" else FreeParam("a")
                )
            mk(vals, "deg1 case a")
            vals = zeros()
            for i in range(1, n, 2):
                vals[i - 1] = (
                    _const_mul(Fraction(2, i + 1)) if name == "rota-baxter" else FreeParam("a")
                )
            mk(vals, "deg1 case b")
        if name == "nijenhuis" and n >= 3:
            vals = zeros()
            seeds = [MFrac.var("a"), MFrac.var("b")]
            vals[0], vals[1] = FreeParam("a"), FreeParam("b")
            chain = list(seeds)
            for i in range(3, n):
                den = seeds[0] + chain[i - 3] - chain[i - 2]
                nxt = seeds[0] * chain[i - 3] / den
                chain.append(nxt)
                vals[i - 1] = normalize_value(Expr(nxt))
            mk(vals, "deg1 case a recurrence")
        min_t = 1 if name == "reynolds" else 2
        for t in range(min_t, half2 + 1):
            vals = zeros()
            for i in range(t, n, t + 1):
                if i <= n - 1:
                    vals[i - 1] = (
                        FreeParam("a") if name == "average" else _const_mul(Fraction(t + 1, i + 1))
                    )
            mk(vals, f"deg1 mod-support t={t}")
        max_r = n - 1 if name in ("nijenhuis", "average") else n - 2
        for r in range(half2 + 1, max_r + 1):
            vals = zeros()
            vals[r - 1] = FreeParam("a")
            if name != "nijenhuis" and r + 1 <= n - 1:
                vals[r] = FreeParam("b")
            mk(vals, f"deg1 spike r={r}")
        return fams

    # degree >= floor(n/2): arbitrary head
    if degree < half:
        raise UnclassifiedRegimeError(
            f"no constructor family for {name} degree {degree} at n={n}"
        )
    vals = zeros()
    for i in range(1, n - degree + 1):
        vals[i - 1] = FreeParam(f"p{i}")
    mk(vals, "arbitrary head")
    return fams


def _pow(f: MFrac, e: int) -> MFrac:
    out = MFrac.const(1)
    for _ in range(e):
        out = out * f
    return out


# -- completeness ------------------------------------------------------------------


@dataclass
class CompletenessReport:
    identity: str
    weight: Fraction | None
    degree: int
    n: int
    solver_labels: list[str] = field(default_factory=list)
    theorem_labels: list[str] = field(default_factory=list)
    matches: list[tuple[str, str, str]] = field(default_factory=list)  # solver, theorem, how
    divergences: list[str] = field(default_factory=list)
    coverage_gaps: list[str] = field(default_factory=list)
    unmatched_solver: list[str] = field(default_factory=list)
    unmatched_theorem: list[str] = field(default_factory=list)
    false_equal_bound: Fraction = Fraction(0)

    @property
    def findings(self) -> list[str]:
        return self.divergences + self.coverage_gaps

    @property
    def bijection(self) -> bool:
        return not (
            self.divergences
            or self.coverage_gaps
            or self.unmatched_solver
            or self.unmatched_theorem
        )


def vector_in_family(vec: tuple[Fraction, ...], fam: SolutionFamily) -> bool:
    """Exact membership of a concrete psi vector in a family.

    Parameter values are read off the family's free positions, then the
    whole vector is validated by instantiation.
    """
    inferred: dict[str, Fraction] = {}
    for i, v in enumerate(fam.assignment, start=1):
        if isinstance(v, FreeParam) and v.name not in inferred:
            inferred[v.name] = vec[i - 1]
    if set(inferred) != set(fam.free_params):
        return False
    try:
        return instantiate(fam, inferred) == tuple(vec)
    except PoleError:
        return False


def _included_in(
    small: SolutionFamily, big: SolutionFamily, trials: int, rng: random.Random
) -> bool:
    """Every specialization of small lies in big (randomized, exact points)."""
    done = 0
    attempts = 0
    while done < trials and attempts < 50 * trials:
        attempts += 1
        try:
            _, vec = sample_psi(small, rng, tries=10)
        except RuntimeError:
            continue
        if not vector_in_family(vec, big):
            return False
        done += 1
    return done > 0


def absorb_included(
    fams: list[SolutionFamily], rng: random.Random, trials: int = 4
) -> list[SolutionFamily]:
    """Drop families included in another family of the same list.

    Beyond the structural zero-specialization merge this also absorbs
    redundant case listings related by a non-zero parameter relation, which
    happens at small n where a later case's hypothesis becomes vacuous.
    """
    kept: list[SolutionFamily] = []
    for i, fam in enumerate(fams):
        drop = False
        for j, other in enumerate(fams):
            if i == j:
                continue
            if _included_in(fam, other, trials, rng):
                if i < j and _included_in(other, fam, trials, rng):
                    continue  # mutually included: keep the earlier
                drop = True
                break
        if not drop:
            kept.append(fam)
    return kept


def _relation_text(small: SolutionFamily, big: SolutionFamily) -> str:
    from .symbolic import render_value

    first_free: dict[str, int] = {}
    for i, v in enumerate(small.assignment, start=1):
        if isinstance(v, FreeParam) and v.name not in first_free:
            first_free[v.name] = i
    parts = []
    for i, (sv, bv) in enumerate(zip(small.assignment, big.assignment), start=1):
        if not isinstance(bv, FreeParam):
            continue
        if isinstance(sv, FreeParam) and first_free.get(sv.name) == i:
            continue
        parts.append(f"psi({i}) = {render_value(sv)}")
    return "; ".join(parts) if parts else "parameter relation"


def verify_completeness(
    kind: IdentityKind,
    degree: int,
    n: int,
    rng: random.Random | None = None,
    trials: int | None = None,
) -> CompletenessReport:
    """Match solver branches against constructor families, both sides merged.

    Pass 1 pairs families that agree extensionally (randomized equality,
    order-aligned parameters); pass 2 pairs a theorem family with the solver
    family it equals after zeroing extra parameters.  Two kinds of findings
    are then possible: a theorem family strictly inside a wider solver
    family under a non-zero parameter relation, and a solver family with
    generic points outside every theorem family (coverage gap).  Either one
    means the constructor case list understates the true solution set; both
    are reported rather than silently accepted or rejected.
    """
    rng = rng or random.Random(20250810)
    solver_fams = classify(kind, degree, n)
    theorem_fams = absorb_included(
        merge_families(theorem_families(kind, degree, n)), rng
    )
    report = CompletenessReport(kind.name, kind.weight, degree, n)
    report.solver_labels = [f.label or f"#{i}" for i, f in enumerate(solver_fams, 1)]
    report.theorem_labels = [f.label for f in theorem_fams]

    deg_bound = max(
        [_family_degree_bound(f) for f in solver_fams + theorem_fams] or [1]
    )
    per_trial = Fraction(2 * deg_bound, 2 * _SAMPLE_BOUND + 1)
    if trials is None:
        trials = max(2, trials_for_bound(per_trial, Fraction(1, 10**9)))
    report.false_equal_bound = min(Fraction(1), per_trial**trials)

    used = [False] * len(solver_fams)
    matched_theorem = [False] * len(theorem_fams)

    for tj, tf in enumerate(theorem_fams):
        for sj, sf in enumerate(solver_fams):
            if used[sj]:
                continue
            if verify_equality(sf, tf, trials=trials, rng=rng).equal:
                used[sj] = True
                matched_theorem[tj] = True
                report.matches.append((report.solver_labels[sj], tf.label, "exact"))
                break

    for tj, tf in enumerate(theorem_fams):
        if matched_theorem[tj]:
            continue
        for sj, sf in enumerate(solver_fams):
            if used[sj]:
                continue
            if subsumed_by(tf, sf):
                used[sj] = True
                matched_theorem[tj] = True
                report.matches.append(
                    (report.solver_labels[sj], tf.label, "zero-specialization")
                )
                break

    for tj, tf in enumerate(theorem_fams):
        if matched_theorem[tj]:
            continue
        for sj, sf in enumerate(solver_fams):
            if _included_in(tf, sf, max(3, trials // 2), rng):
                matched_theorem[tj] = True
                report.divergences.append(
                    f"constructor family '{tf.label}' strictly inside solver family "
                    f"'{report.solver_labels[sj]}' ({_relation_text(tf, sf)})"
                )
                break

    # coverage: generic solver points must lie in some constructor family
    for sj, sf in enumerate(solver_fams):
        for _ in range(3):
            try:
                _, vec = sample_psi(sf, rng, tries=10)
            except RuntimeError:
                continue
            if not any(vector_in_family(vec, tf) for tf in theorem_fams):
                shown = "(" + ", ".join(str(c) for c in vec) + ")"
                report.coverage_gaps.append(
                    f"solver family '{report.solver_labels[sj]}' has solutions outside "
                    f"every constructor family, e.g. psi = {shown}"
                )
                break

    report.unmatched_theorem = [
        tf.label for tj, tf in enumerate(theorem_fams) if not matched_theorem[tj]
    ]
    report.unmatched_solver = [
        report.solver_labels[sj] for sj in range(len(solver_fams)) if not used[sj]
    ]
    if report.divergences or report.coverage_gaps:
        flagged = set()
        for line in report.divergences + report.coverage_gaps:
            for lab in report.solver_labels:
                if f"'{lab}'" in line:
                    flagged.add(lab)
        report.unmatched_solver = [
            lab for lab in report.unmatched_solver if lab not in flagged
        ]
    return report


def classified_regimes(kind: IdentityKind, n: int) -> list[int]:
    """Degrees classify() accepts for one identity at dimension n."""
    return [k for k in range(0, n) if classified_regime(kind, k, n)]
