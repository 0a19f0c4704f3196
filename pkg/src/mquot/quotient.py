"""Quotient classes [A^d_K / G] and explicit invariant rings in dimension one.

In dimension one the invariant ring is computed by descending through
subgroups of order p generated by γ = α^{p^{r-1}} (α a wild generator of order
p^r).  With b the translation of γ the cases are

* γ acts trivially                       -> nothing to do ("subgroup-descent"),
* γ fixes K, b != 0                      -> y' = y^p - b^{p-1} y,
* γ moves K, b = 0                       -> K' = K^γ, same coordinate,
* γ moves K, b != 0 (Artin–Schreier)     -> y' = y - b', (γ - 1) b' = b,
  with b' projected onto the joint eigencomponent of the tame generators so
  they keep acting diagonally ("eigencomponent-fix").

What remains is a tame group acting by y -> μ y over some K_cur; its invariant
ring is k'[c·y^δ] for the least δ admitting a nonzero c with σ_l(c) μ_l^δ = c.
Every step is recorded in a ``ComputationTrace`` and can be replayed against
the original action.

Ledger note: in the "γ fixes K" case the stored invariant is the unit multiple
-b^{p-1} · (y + (p-1) b^{1-p} y^p) of the textbook one, so it is monic in y^p.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import reduce
from math import gcd

from . import gfq, linalg, oracle
from .action import (
    ChangeOfCoordinates,
    GeneratorDatum,
    SemiLinearAffineAction,
    normal_form,
    validate,
)
from .errors import HypothesisViolation, MissingQuotientRule, ShapeViolation, UnquotientedBase
from .mclass import K0, K0_MOD, M, M_MOD, MotivicClass, RingTag
from .poly import Poly

STEP_KINDS = ("normalize", "tame-recenter", "subgroup-descent", "case-b-zero", "case-frobenius-trivial",
              "case-artin-schreier", "eigencomponent-fix", "tame-base", "fibration-descent")


@dataclass
class GeneratorState:
    """Induced action of one generator on K_cur[y]: y -> y + value (wild) or value·y (tame)."""

    kind: str  # "wild" or "tame"
    order: int
    twist: int
    value: tuple

    def to_record(self):
        return {"kind": self.kind, "order": self.order, "twist": self.twist, "value": list(self.value)}


@dataclass
class TraceStep:
    kind: str
    params: dict
    substitution: Poly | None = None  # new coordinate as a polynomial in the previous one
    field_degree: int | None = None  # degree over k of the current coefficient field
    generators: list = field(default_factory=list)  # GeneratorState snapshots after the step

    def to_record(self):
        rec = {"kind": self.kind, "params": _jsonable(self.params)}
        if self.substitution is not None:
            rec["substitution"] = self.substitution.to_document()
        if self.field_degree is not None:
            rec["field_degree"] = self.field_degree
        if self.generators:
            rec["generators"] = [g.to_record() for g in self.generators]
        return rec


@dataclass
class ComputationTrace:
    steps: list = field(default_factory=list)

    def add(self, step):
        if step.kind not in STEP_KINDS:
            raise ValueError(f"unknown trace step kind {step.kind}")
        self.steps.append(step)

    def kinds(self):
        return [s.kind for s in self.steps]

    def to_record(self):
        return {"steps": [s.to_record() for s in self.steps]}


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, Poly):
        return x.to_document()
    return x


@dataclass
class InvariantRingResult:
    base_field_degree: int  # [k' : k]
    generator_poly: Poly  # invariant coordinate as a polynomial in the original x
    trace: ComputationTrace
    degree: int

    def to_record(self):
        return {"base_field_degree": self.base_field_degree, "degree": self.degree,
                "generator_poly": self.generator_poly.to_document(), "generator": repr(self.generator_poly),
                "trace": self.trace.to_record()}


# --- helpers on subfields of K --------------------------------------------------

def _subfield_basis(a, n_sub):
    """F_p-basis of F_{q^n_sub} inside K."""
    return a.K.fixed_subfield_basis(a.f * n_sub)


def _solve_in_subfield(a, n_sub, maps, rhs):
    """c in F_{q^n_sub} with Σ-stacked F_p-linear conditions maps[i](c) = rhs[i]."""
    K = a.K
    basis = _subfield_basis(a, n_sub)
    Fp = gfq.prime_field(a.p)
    rows, vec = [], []
    for fn, r in zip(maps, rhs):
        cols = [fn(b) for b in basis]
        rows += [list(x) for x in zip(*cols)]
        vec += list(r)
    sol = linalg.solve(rows, vec, Fp, ncols=len(basis))
    if sol is None:
        return None
    return reduce(K.add, (K.smul(s, b) for s, b in zip(sol, basis) if s), K.zero)


def _kernel_in_subfield(a, n_sub, maps):
    K = a.K
    basis = _subfield_basis(a, n_sub)
    Fp = gfq.prime_field(a.p)
    rows = []
    for fn in maps:
        cols = [fn(b) for b in basis]
        rows += [list(x) for x in zip(*cols)]
    kern = linalg.nullspace(rows, len(basis), Fp) if rows else linalg.identity(len(basis), Fp)
    return [reduce(K.add, (K.smul(s, b) for s, b in zip(v, basis) if s), K.zero) for v in kern]


# --- dimension one --------------------------------------------------------------

def invariant_ring_d1(a: SemiLinearAffineAction) -> InvariantRingResult:
    """Present K[x]^G as k'[z] for a one-dimensional action."""
    if a.d != 1:
        raise ShapeViolation(f"invariant_ring_d1 needs d = 1, got d = {a.d}")
    rep = validate(a)
    if not rep.ok:
        raise HypothesisViolation("; ".join(rep.messages()), rep.failed)
    K, p = a.K, a.p
    trace = ComputationTrace()
    b, change = normal_form(a)
    x = Poly.var(K, 1, 0)
    Y = x
    nw = len(a.group.wild_orders)
    states = []
    for i, g in enumerate(b.generators):
        if i < nw:
            states.append(GeneratorState("wild", a.group.orders[i], g.twist, g.translation[0]))
        else:
            states.append(GeneratorState("tame", a.group.orders[i], g.twist, g.matrix[0][0]))
    n_cur = a.n

    def snap():
        return [GeneratorState(s.kind, s.order, s.twist, s.value) for s in states]

    def record(kind, params, sub=None):
        nonlocal Y
        if sub is not None:
            Y = sub.compose(Y)
        trace.add(TraceStep(kind, params, sub, n_cur, snap()))

    row = change.matrix[0][0]
    if row != K.one:
        record("normalize", {"scale": list(row)}, Poly.linear(K, [row]))
    if not K.is_zero(change.shift[0]):
        record("tame-recenter", {"shift": list(change.shift[0])},
               Poly.linear(K, [K.one], K.neg(change.shift[0])))

    while True:
        idx = next((i for i, s in enumerate(states) if s.kind == "wild" and s.order > 1), None)
        if idx is None:
            break
        st = states[idx]
        s_ord = st.order // p
        e_gamma = st.twist * s_ord
        bval = reduce(K.add, (a.sigma(st.value, i * st.twist) for i in range(s_ord)), K.zero)
        moves_field = e_gamma % n_cur != 0
        params = {"generator": idx, "gamma_twist": e_gamma % n_cur, "b": list(bval)}
        if not moves_field and K.is_zero(bval):
            st.order = s_ord
            record("subgroup-descent", params)
        elif not moves_field:
            bp = K.pow(bval, p - 1)
            sub = Poly(K, 1, {(p,): K.one, (1,): K.neg(bp)})
            for s in states:
                if s.kind == "wild":
                    s.value = K.sub(K.pow(s.value, p), K.mul(bp, s.value))
                else:
                    s.value = K.pow(s.value, p)
            st.order = s_ord
            record("case-frobenius-trivial", dict(params, rescale=list(K.neg(bp))), sub)
        elif K.is_zero(bval):
            n_cur //= p
            for s in states:
                if s.kind == "wild" and not a.in_subfield(s.value, n_cur):
                    raise ShapeViolation("a wild translation left the fixed field of γ")
            st.order = s_ord
            record("case-b-zero", dict(params, new_field_degree=n_cur))
        else:
            bprime, jordan = _artin_schreier_shift(a, n_cur, e_gamma, bval)
            omega = jordan[1]
            n_new = n_cur // p
            record("case-artin-schreier", dict(params, omega=list(omega),
                                                jordan_basis=[list(v) for v in jordan],
                                                b_prime=list(bprime)))
            b1 = _eigencomponent(a, states, bprime)
            gamma = lambda c: a.sigma(c, e_gamma)
            if K.sub(gamma(b1), b1) != bval:
                raise ShapeViolation("eigencomponent correction broke (γ - 1) b' = b")
            for s in states:
                if s.kind == "wild":
                    s.value = K.sub(K.add(s.value, b1), a.sigma(b1, s.twist))
                    if not a.in_subfield(s.value, n_new):
                        raise ShapeViolation("an induced wild translation is not in K'")
                elif K.sub(K.mul(s.value, b1), a.sigma(b1, s.twist)) != K.zero:
                    raise ShapeViolation("an induced tame generator is no longer diagonal")
            n_cur = n_new
            st.order = s_ord
            record("eigencomponent-fix", {"b1": list(b1), "new_field_degree": n_cur},
                   Poly.linear(K, [K.one], K.neg(b1)))

    # tame base: least δ with a nonzero c, σ_l(c) μ_l^δ = c
    tame = [s for s in states if s.kind == "tame"]
    bound = max(1, reduce(lambda u, v: u * v, (s.order for s in tame), 1))
    for delta in range(1, bound + 1):
        maps = [(lambda s: (lambda c: K.sub(K.mul(a.sigma(c, s.twist), K.pow(s.value, delta)), c)))(s)
                for s in tame]
        sols = _kernel_in_subfield(a, n_cur, maps)
        if sols:
            break
    else:  # pragma: no cover - δ = |H| always works with c = 1
        raise ShapeViolation("no tame invariant generator found")
    c = _least_nonzero(K, sols)
    sub = Poly(K, 1, {(delta,): c})
    for s in states:
        s.value = K.zero if s.kind == "wild" else K.one
    n_fixed = reduce(gcd, [s.twist for s in tame], n_cur)
    record("tame-base", {"delta": delta, "c": list(c), "fixed_field_degree": n_fixed}, sub)
    return InvariantRingResult(n_fixed, Y, trace, Y.degree())


def _artin_schreier_shift(a, n_cur, e_gamma, b):
    """b' with (γ - 1) b' = b, via the chain 1, ω, v_3, ..., v_p with (γ - 1) v_{i+1} = v_i."""
    K, p = a.K, a.p
    gamma_minus_1 = lambda c: K.sub(a.sigma(c, e_gamma), c)
    chain = [K.one]
    for _ in range(p - 1):
        v = _solve_in_subfield(a, n_cur, [gamma_minus_1], [chain[-1]])
        if v is None:
            raise ShapeViolation("Artin–Schreier chain could not be extended")
        chain.append(v)
    n_small = n_cur // p
    small = _subfield_basis(a, n_small)
    cols = [K.mul(s, v) for v in chain for s in small]
    Fp = gfq.prime_field(p)
    rows = [list(r) for r in zip(*cols)]
    sol = linalg.solve(rows, list(b), Fp, ncols=len(cols))
    if sol is None:
        raise ShapeViolation("b is not in K_cur")
    m = len(small)
    coeff = [reduce(K.add, (K.smul(sol[i * m + t], small[t]) for t in range(m)), K.zero) for i in range(p)]
    if not K.is_zero(coeff[p - 1]):
        raise ShapeViolation("b has a nonzero top component (trace of b is not zero)")
    bprime = reduce(K.add, (K.mul(coeff[i], chain[i + 1]) for i in range(p - 1)), K.zero)
    return bprime, chain


def _eigencomponent(a, states, c):
    """Project c onto {c : σ_l(c) = μ_l c for all tame l}."""
    K = a.K
    for s in states:
        if s.kind != "tame":
            continue
        mu_inv = K.inv(s.value)
        acc = K.zero
        for j in range(s.order):
            acc = K.add(acc, K.mul(K.pow(mu_inv, j), a.sigma(c, j * s.twist)))
        c = K.smul(pow(s.order, a.p - 2, a.p), acc)
    return c


def _least_nonzero(K, basis):
    p = K.p
    if p ** len(basis) > 4096:
        return basis[0]
    best = None
    for coeffs in itertools.product(range(p), repeat=len(basis)):
        if not any(coeffs):
            continue
        v = reduce(K.add, (K.smul(s, b) for s, b in zip(coeffs, basis)), K.zero)
        if best is None or K.to_int(v) < K.to_int(best):
            best = v
    return best


def invariant_check(poly: Poly, a: SemiLinearAffineAction) -> bool:
    """True iff every generator fixes ``poly`` under coordinate-ring substitution."""
    return all(a.act_on_poly(g, poly) == poly for g in a.generators)


def replay_trace(a: SemiLinearAffineAction, result: InvariantRingResult) -> bool:
    """Re-apply the recorded substitutions and check each recorded induced action."""
    K = a.K
    Y = Poly.var(K, 1, 0)
    for step in result.trace.steps:
        if step.substitution is not None:
            Y = step.substitution.compose(Y)
        for g, s in zip(a.generators, step.generators):
            if not a.in_subfield(s.value, step.field_degree):
                return False
            expected = Y + Poly.const(K, 1, s.value) if s.kind == "wild" else Y * s.value
            if a.act_on_poly(g, Y) != expected:
                return False
    return Y == result.generator_poly


def generator_point_count(a: SemiLinearAffineAction, result: InvariantRingResult, m: int,
                          budget: oracle.Budget = oracle.Budget()):
    """Count F_{q^m}-points of the quotient through the invariant coordinate z.

    Evaluates z on every point of every Frobenius^m-stable orbit.  z must be
    constant on orbits, take values in F_{q^m}, and separate orbits; the count
    is the number of distinct values.
    """
    S, points, _, orbits = oracle.stable_orbits(a, m, budget)
    F = S.F
    values = set()
    constant = separating = in_field = True
    z = result.generator_poly
    for orb in orbits:
        vals = {z.evaluate(v, F, coeff_map=lambda c, j=j: S.tau(c, j)) for j, v in orb}
        if len(vals) != 1:
            constant = False
        (val,) = vals if len(vals) == 1 else (min(vals),)
        if F.frob(val, a.f * m) != val:
            in_field = False
        if val in values:
            separating = False
        values.add(val)
    return {"count": len(values), "orbits": len(orbits), "constant_on_orbits": constant,
            "separating": separating, "values_in_field": in_field,
            "ok": constant and separating and in_field and len(values) == a.q ** m}


# --- classes --------------------------------------------------------------------

def _truncate(a: SemiLinearAffineAction, i: int) -> SemiLinearAffineAction:
    """The induced action on the first i coordinates (well defined in normal form)."""
    gens = [GeneratorDatum(g.twist, [row[:i] for row in g.matrix[:i]], g.translation[:i], g.order)
            for g in a.generators]
    return SemiLinearAffineAction(a.p, a.f, a.n, i, a.group, gens, f"{a.name}|{i}")


def quotient_class(a: SemiLinearAffineAction, budget: oracle.Budget | None = None):
    """[A^d_K / G] = L^d with an auditable trace; K0 for tame groups, K0_mod otherwise."""
    rep = validate(a)
    if not rep.ok:
        raise HypothesisViolation("; ".join(rep.messages()), rep.failed)
    tag = K0 if a.group.is_tame else K0_MOD
    trace = ComputationTrace()
    if a.d == 0:
        return MotivicClass.one(tag), trace
    if a.d == 1:
        res = invariant_ring_d1(a)
        for s in res.trace.steps:
            trace.add(s)
        return MotivicClass.lefschetz(1, tag), trace
    budget = budget or oracle.Budget(max_degree=64, max_points=20_000)
    b, change = normal_form(a)
    if not change.is_identity(a.K):
        trace.add(TraceStep("normalize", {"matrix": [[list(c) for c in r] for r in change.matrix],
                                          "shift": [list(c) for c in change.shift]}))
    for i in range(a.d, 0, -1):
        params = {"from_dim": i, "to_dim": i - 1, "fiber_coordinate": i,
                  "relation": f"[A^{i}/G] = L * [A^{i - 1}/G]"}
        base = _truncate(b, i - 1)
        try:
            _, _, _, orbits = oracle.stable_orbits(base, 1, budget)
            S = oracle.PointSpace(base, oracle.enumeration_degree(base, 1))
            w0 = min(orbits[0])
            st = oracle.stabilizer(base, w0, S.N)
            params["stabilizer"] = {"point": [w0[0], [list(c) for c in w0[1]]],
                                    "words": [list(w) for w in st.words], "order": len(st.words),
                                    "orbit_size": st.orbit_size, "consistent": st.consistent}
        except oracle.BudgetExceeded as exc:
            params["stabilizer"] = {"skipped": str(exc)}
        trace.add(TraceStep("fibration-descent", params))
    return MotivicClass.lefschetz(a.d, tag), trace


@dataclass
class QuotientRules:
    """Declared quotients [X/G] of equivariant symbols.

    ``quotients`` maps a symbol to its quotient class, ``trivial`` lists
    symbols with trivial action (kept as they are), ``bundles`` maps a symbol
    to ``(rank, base symbol)`` for equivariant affine bundles.
    """

    quotients: dict = field(default_factory=dict)
    trivial: frozenset = frozenset()
    bundles: dict = field(default_factory=dict)
    tame: bool = True


def _target_tag(src: RingTag, tame: bool):
    if src.localized:
        return M if tame else M_MOD
    return K0 if tame else K0_MOD


def quotient_homomorphism(c: MotivicClass, rules: QuotientRules) -> MotivicClass:
    """Additive map [X] -> [X/G], linear over the trivially acted subring, L -> L."""
    tag = _target_tag(c.tag, rules.tame)

    def image(s):
        if s in rules.quotients:
            return rules.quotients[s].retag(tag)
        if s in rules.bundles:
            rank, base = rules.bundles[s]
            if base not in rules.quotients and base not in rules.trivial:
                raise MissingQuotientRule(f"bundle [{s}] over [{base}] without a quotient of its base")
            base_q = image(base)
            return MotivicClass.lefschetz(rank, tag) * base_q
        raise MissingQuotientRule(s)

    out = MotivicClass.zero(tag)
    for mono, poly in c.body:
        acted = [s for s in mono if s not in rules.trivial]
        if len(acted) > 1:
            raise MissingQuotientRule(f"no rule for the product {'*'.join(acted)} of acted symbols")
        term = MotivicClass(tag, {tuple(s for s in mono if s in rules.trivial): poly})
        if acted:
            term = term * image(acted[0])
        out = out + term
    return out


def affine_bundle_quotient_rule(rank: int, base_class: MotivicClass, rules: QuotientRules) -> MotivicClass:
    """[V/G] = L^rank · [B/G] for an equivariant affine bundle V -> B."""
    if not base_class.tag.equivariant:
        raise UnquotientedBase(f"base class has non-equivariant tag {base_class.tag}")
    try:
        q = quotient_homomorphism(base_class, rules)
    except MissingQuotientRule as exc:
        raise UnquotientedBase(str(exc)) from exc
    return MotivicClass.lefschetz(rank, q.tag) * q
