"""Motivic nearby fiber, its μ̂-quotient and the motivic reduction of an SNC model.

For an SNC model with components E_i of multiplicity N_i, strata E_I^o and their
μ_{m_I}-covers Ẽ_I^o (m_I = gcd of N_i over I):

    S_f     = Σ_{I≠∅} (1 - L)^{|I|-1} [Ẽ_I^o]        (equivariant, in M)
    S_f/μ̂  = Σ_{I≠∅} (1 - L)^{|I|-1} [E_I^o]
    R(f)    = Σ_{I≠∅} [E_I^o]  mod L

Strata classes are declared input; only structure (subset lattice, m_I, tags)
is validated.  A declared cover quotient that disagrees with its stratum is
not rejected here; it surfaces as a failed congruence check.

Model document::

    {"name": str,
     "components": [{"name": str, "N": int}, ...],
     "symbols": [{"name": str, "action_tag": int | null, "metadata": str}, ...],
     "strata": [{"subset": [component names], "class_E": CLASS,
                 "class_E_cover": CLASS, "m": int}, ...],
     "cover_quotients": {symbol: CLASS},
     "total_class": CLASS (optional),
     "generic_fiber_class": CLASS (optional)}

where CLASS is the class document of ``mquot.mclass``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field, replace
from functools import reduce
from math import gcd, lcm

from .errors import ModelInvalid, ParseError, TotalClassMismatch
from .mclass import (
    K0,
    M,
    MotivicClass,
    RealizationSpec,
    RingTag,
    Session,
    M_mu,
    mod_L,
    one_minus_L_power,
    realize,
)
from .quotient import QuotientRules, quotient_homomorphism


@dataclass(frozen=True)
class Stratum:
    subset: frozenset
    class_E: MotivicClass
    class_E_cover: MotivicClass
    m: int


@dataclass
class SncModel:
    name: str
    components: list  # [(name, N)]
    strata: dict  # frozenset -> Stratum
    symbols: dict = field(default_factory=dict)  # name -> action tag (None for plain symbols)
    cover_quotients: dict = field(default_factory=dict)  # symbol -> MotivicClass (plain)
    total_class: MotivicClass | None = None
    generic_fiber_class: MotivicClass | None = None
    notes: str = ""

    @property
    def multiplicities(self):
        return dict(self.components)

    def m_of(self, subset):
        N = self.multiplicities
        return reduce(gcd, (N[i] for i in subset), 0)

    def subsets(self):
        names = [c for c, _ in self.components]
        out = []
        for k in range(1, len(names) + 1):
            out += [frozenset(s) for s in itertools.combinations(names, k)]
        return out

    def ordered_strata(self):
        names = [c for c, _ in self.components]
        key = lambda I: (len(I), sorted(names.index(i) for i in I))
        return [self.strata[I] for I in sorted(self.strata, key=key)]

    def lcm_m(self):
        return reduce(lcm, (s.m for s in self.strata.values()), 1)

    def all_symbols(self):
        out = set()
        for s in self.strata.values():
            out |= set(s.class_E.symbols()) | set(s.class_E_cover.symbols())
        return sorted(out)

    # io
    def to_document(self):
        names = [c for c, _ in self.components]
        doc = {
            "name": self.name,
            "components": [{"name": c, "N": n} for c, n in self.components],
            "symbols": [{"name": s, "action_tag": t} for s, t in sorted(self.symbols.items())],
            "strata": [{"subset": sorted(st.subset, key=names.index), "m": st.m,
                        "class_E": st.class_E.to_document(), "class_E_cover": st.class_E_cover.to_document()}
                       for st in self.ordered_strata()],
            "cover_quotients": {s: c.to_document() for s, c in sorted(self.cover_quotients.items())},
        }
        if self.total_class is not None:
            doc["total_class"] = self.total_class.to_document()
        if self.generic_fiber_class is not None:
            doc["generic_fiber_class"] = self.generic_fiber_class.to_document()
        if self.notes:
            doc["notes"] = self.notes
        return doc

    @classmethod
    def from_document(cls, doc):
        try:
            comps = [(c["name"], int(c["N"])) for c in doc["components"]]
            strata = {}
            for s in doc["strata"]:
                I = frozenset(s["subset"])
                if I in strata:
                    raise ModelInvalid(f"stratum {sorted(I)} declared twice")
                strata[I] = Stratum(I, MotivicClass.from_document(s["class_E"]),
                                    MotivicClass.from_document(s["class_E_cover"]), int(s["m"]))
            symbols = {s["name"]: s.get("action_tag") for s in doc.get("symbols", [])}
            cq = {k: MotivicClass.from_document(v) for k, v in doc.get("cover_quotients", {}).items()}
            total = MotivicClass.from_document(doc["total_class"]) if doc.get("total_class") else None
            gen = (MotivicClass.from_document(doc["generic_fiber_class"])
                   if doc.get("generic_fiber_class") else None)
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"malformed model document: {exc}") from exc
        return cls(doc.get("name", ""), comps, strata, symbols, cq, total, gen, doc.get("notes", ""))


def validate_model(model: SncModel):
    """Structural checks; raises ModelInvalid with every problem found."""
    problems = []
    names = [c for c, _ in model.components]
    if len(set(names)) != len(names) or not names:
        problems.append("component names must be distinct and nonempty")
    for c, n in model.components:
        if n < 1:
            problems.append(f"multiplicity of {c} must be positive")
    want = set(model.subsets())
    have = set(model.strata)
    if want - have:
        problems.append(f"missing strata {sorted(sorted(I) for I in want - have)} (declare empty ones as 0)")
    if have - want:
        problems.append(f"strata over unknown components {sorted(sorted(I) for I in have - want)}")
    for I, st in model.strata.items():
        if not I <= set(names):
            continue
        m = model.m_of(I)
        if st.m != m:
            problems.append(f"stratum {sorted(I)} declares m={st.m}, gcd of multiplicities is {m}")
        if st.class_E.tag != K0:
            problems.append(f"stratum {sorted(I)}: class_E must be tagged K0, got {st.class_E.tag}")
        if st.class_E_cover.tag not in (RingTag("K0", mu=m), RingTag("M", mu=m)):
            problems.append(f"stratum {sorted(I)}: cover must carry a mu_{m} tag, got {st.class_E_cover.tag}")
        for s in st.class_E_cover.symbols():
            tag = model.symbols.get(s)
            if tag is not None and tag != m:
                problems.append(f"cover symbol {s} has action tag {tag}, stratum needs {m}")
    for s, tag in model.symbols.items():
        if tag is not None and s not in model.cover_quotients:
            problems.append(f"equivariant symbol {s} has no declared quotient")
    if problems:
        raise ModelInvalid("; ".join(problems))


def _rules(model: SncModel) -> QuotientRules:
    trivial = frozenset(s for s in model.all_symbols() if model.symbols.get(s) is None)
    return QuotientRules(quotients=dict(model.cover_quotients), trivial=trivial, tame=True)


def nearby_fiber(model: SncModel) -> MotivicClass:
    """S_f as a μ̂-equivariant class (tag M_mu<lcm of m_I>)."""
    validate_model(model)
    tag = M_mu(model.lcm_m())
    out = MotivicClass.zero(tag)
    for st in model.ordered_strata():
        out = out + one_minus_L_power(len(st.subset) - 1, tag) * st.class_E_cover.retag(tag)
    return out


def nearby_fiber_quotient(model: SncModel) -> MotivicClass:
    """S_f/μ̂ via the declared cover quotients (tag M)."""
    return quotient_homomorphism(nearby_fiber(model), _rules(model))


def direct_quotient_sum(model: SncModel) -> MotivicClass:
    """Σ (1 - L)^{|I|-1} [E_I^o] computed from the plain strata (tag M)."""
    out = MotivicClass.zero(M)
    for st in model.ordered_strata():
        out = out + one_minus_L_power(len(st.subset) - 1, M) * st.class_E.retag(M)
    return out


def special_fiber_class(model: SncModel) -> MotivicClass:
    validate_model(model)
    return reduce(lambda x, y: x + y, (st.class_E for st in model.ordered_strata()), MotivicClass.zero(K0))


def motivic_reduction(model: SncModel, session: Session | None = None) -> MotivicClass:
    """R(f) = [h^{-1}(X_0)] mod L, with the strata partitioning the special fiber."""
    total = special_fiber_class(model)
    if model.total_class is not None:
        s = session or Session()
        if s.canonicalize(total) != s.canonicalize(model.total_class):
            raise TotalClassMismatch(f"strata sum to {total}, declared total is {model.total_class}")
    return mod_L(total)


def congruence_check(model: SncModel):
    """(holds, witness): mod_L(S_f/μ̂) against R(f); the witness is their difference."""
    lhs = mod_L(nearby_fiber_quotient(model))
    rhs = motivic_reduction(model)
    diff = lhs.retag(rhs.tag) - rhs
    return diff.is_zero(), diff


@dataclass(frozen=True)
class BlowupStep:
    codim: int
    center_class: MotivicClass
    ambient_class: MotivicClass
    projective_dim: int | None = None  # exponent c of [P^c]; defaults to codim

    def __post_init__(self):
        if self.codim < 1 and self.projective_dim is None:
            raise ValueError("codim must be at least 1")


def blowup_step_identity(step: BlowupStep) -> bool:
    """ambient - center + [P^c]·center ≡ ambient mod L.

    The exponent c defaults to the codimension; the usual exceptional-divisor
    count uses codim - 1.  Both residues of [P^c] are 1, so either choice
    passes; pass ``projective_dim`` to pick one explicitly.
    """
    c = step.codim if step.projective_dim is None else step.projective_dim
    tag = step.ambient_class.tag
    after = step.ambient_class - step.center_class + MotivicClass.projective_space(c, tag) * step.center_class
    return mod_L(after) == mod_L(step.ambient_class)


def realize_model(model: SncModel, spec: RealizationSpec):
    """Realized S_f/μ̂ and R(f), plus the "generic fiber ≡ 1 implies R ≡ 1" shadow."""
    sq = nearby_fiber_quotient(model)
    one = spec.one
    realized_sq = realize(sq, spec)
    assembled = 0 * one
    for st in model.ordered_strata():
        assembled = assembled + _pow(one - spec.L_image, len(st.subset) - 1, one) * realize(st.class_E, spec)
    fiber = realize(special_fiber_class(model), spec)
    R = spec.residue(fiber)
    report = {
        "model": model.name,
        "S_f_quotient": _show(realized_sq),
        "assembly_matches": realized_sq == assembled,
        "special_fiber": _show(fiber),
        "R_residue": _show(R),
        "S_f_quotient_residue": _show(spec.residue(realized_sq)),
        "congruent": spec.residue(realized_sq) == R,
    }
    if model.generic_fiber_class is not None:
        gen = realize(model.generic_fiber_class, spec)
        gen_is_one = spec.residue(gen - one) == spec.residue(0 * one)
        r_is_one = spec.residue(fiber - one) == spec.residue(0 * one)
        report["generic_fiber"] = _show(gen)
        report["generic_is_1_mod_L"] = gen_is_one
        report["R_is_1_mod_L"] = r_is_one
        report["corollary_shadow_holds"] = (not gen_is_one) or r_is_one
    return report


def _pow(x, k, one):
    r = one
    for _ in range(k):
        r = r * x
    return r


def _show(v):
    return v if isinstance(v, int) else repr(v)


def mutate(model: SncModel, name: str, **changes) -> SncModel:
    """Copy of ``model`` with some strata or quotients replaced (for negative controls).

    ``changes`` may contain ``class_E={subset: class}``, ``class_E_cover={subset: class}``
    and ``cover_quotients={symbol: class}``.  The declared total is dropped.
    """
    strata = dict(model.strata)
    for I, cls in changes.get("class_E", {}).items():
        strata[frozenset(I)] = replace(strata[frozenset(I)], class_E=cls)
    for I, cls in changes.get("class_E_cover", {}).items():
        strata[frozenset(I)] = replace(strata[frozenset(I)], class_E_cover=cls)
    cq = dict(model.cover_quotients)
    cq.update(changes.get("cover_quotients", {}))
    return SncModel(name, list(model.components), strata, dict(model.symbols), cq, None,
                    model.generic_fiber_class, f"mutation of {model.name}")
