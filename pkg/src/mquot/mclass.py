"""Symbolic classes in K_0(Var), its localization M, the modified rings and the
equivariant variants.

A class is a finite sum  Σ_m P_m(L) · m  where m runs over commutative
monomials in named stratum symbols (the empty monomial is the point) and P_m is
a Laurent polynomial in the Lefschetz class L with integer coefficients.
Equality is canonical-form equality under the scissors rules and aliases that a
``Session`` has registered; nothing deeper is decided.

Document grammar (JSON, keys sorted, no whitespace)::

    {"ring_tag": TAG,
     "terms": [{"coeffs": [[exp, coeff], ...], "symbols": [name, ...]}, ...]}

TAG is one of ``K0``, ``K0_mod``, ``M``, ``M_mod``, ``K0_mu<m>``, ``M_mu<m>``,
optionally followed by ``/L`` for residues modulo L.  Terms are listed in
canonical order (monomials sorted lexicographically by their sorted name
tuples, exponents ascending) and ``symbols`` repeats a name once per power.
"""

from __future__ import annotations

import json
import random
import re
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from math import comb

from .errors import (
    CircularDefinition,
    MissingSymbolImage,
    NegativeExponent,
    ParseError,
    SymbolAlreadyDefined,
    TagMismatch,
    UnknownSymbol,
)


# --- ring tags ---------------------------------------------------------------

@dataclass(frozen=True, order=True)
class RingTag:
    base: str = "K0"  # "K0" or "M"
    mod: bool = False
    mu: int | None = None  # order of the root-of-unity action, equivariant rings only
    residue: bool = False  # element of the ring modulo L

    def __post_init__(self):
        if self.base not in ("K0", "M"):
            raise ValueError(f"unknown base ring {self.base!r}")
        if self.mu is not None and (self.mod or self.mu < 1):
            raise ValueError("equivariant tags are K0_mu<m> or M_mu<m> with m >= 1")

    @property
    def localized(self):
        return self.base == "M"

    @property
    def equivariant(self):
        return self.mu is not None

    def __str__(self):
        s = self.base
        if self.mod:
            s += "_mod"
        if self.mu is not None:
            s += f"_mu{self.mu}"
        if self.residue:
            s += "/L"
        return s

    @classmethod
    def parse(cls, s):
        m = re.fullmatch(r"(K0|M)(_mod)?(?:_mu(\d+))?(/L)?", s)
        if not m:
            raise ParseError(f"bad ring tag {s!r}")
        return cls(m.group(1), bool(m.group(2)), int(m.group(3)) if m.group(3) else None, bool(m.group(4)))


K0 = RingTag("K0")
K0_MOD = RingTag("K0", mod=True)
M = RingTag("M")
M_MOD = RingTag("M", mod=True)


def K0_mu(m):
    return RingTag("K0", mu=m)


def M_mu(m):
    return RingTag("M", mu=m)


def _coercible(src: RingTag, dst: RingTag):
    if src == dst:
        return True
    if src.residue or dst.residue or src.mu != dst.mu:
        return False
    if src.mod and not dst.mod:
        return False
    if src.localized and not dst.localized:
        return False
    if src.mu is not None and dst.mod:
        return False
    return True


# --- Laurent polynomials in L -------------------------------------------------

class LefschetzPoly:
    """Σ c_e L^e with integer c_e; stored without zero coefficients."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        if terms is None:
            terms = {}
        elif not isinstance(terms, dict):
            acc = {}
            for e, c in terms:
                acc[e] = acc.get(e, 0) + c
            terms = acc
        self.terms = tuple(sorted((int(e), int(c)) for e, c in terms.items() if c))

    @classmethod
    def const(cls, c):
        return cls({0: c})

    @classmethod
    def L(cls, e=1):
        return cls({e: 1})

    def as_dict(self):
        return dict(self.terms)

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        return isinstance(other, LefschetzPoly) and self.terms == other.terms

    def __hash__(self):
        return hash(self.terms)

    def __add__(self, other):
        d = self.as_dict()
        for e, c in other.terms:
            d[e] = d.get(e, 0) + c
        return LefschetzPoly(d)

    def __neg__(self):
        return LefschetzPoly({e: -c for e, c in self.terms})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            return LefschetzPoly({e: c * other for e, c in self.terms})
        d = {}
        for e1, c1 in self.terms:
            for e2, c2 in other.terms:
                d[e1 + e2] = d.get(e1 + e2, 0) + c1 * c2
        return LefschetzPoly(d)

    __rmul__ = __mul__

    def min_exp(self):
        return self.terms[0][0] if self.terms else 0

    def evaluate(self, L_value, one=1):
        acc = None
        for e, c in self.terms:
            term = c * _power(L_value, e, one)
            acc = term if acc is None else acc + term
        return acc if acc is not None else 0 * one

    def __repr__(self):
        return f"LefschetzPoly({dict(self.terms)})"

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for e, c in reversed(self.terms):
            mono = "" if e == 0 else ("L" if e == 1 else f"L^{e}")
            if not mono:
                s = str(abs(c))
            elif abs(c) == 1:
                s = mono
            else:
                s = f"{abs(c)}*{mono}"
            parts.append(("-" if c < 0 else "+", s))
        out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, s in parts[1:]:
            out += f" {sign} {s}"
        return out


def _power(x, e, one):
    if e >= 0:
        r = one
        for _ in range(e):
            r = r * x
        return r
    if isinstance(x, int):
        return Fraction(1, x) ** (-e)
    return x.inverse() ** (-e)


# --- stratum symbols and classes --------------------------------------------

@dataclass(frozen=True)
class StratumSymbol:
    name: str
    action_tag: int | None = None
    metadata: str = ""


class MotivicClass:
    """Immutable canonical-form element  Σ P_m(L) · m  carrying a ring tag."""

    __slots__ = ("tag", "body")

    def __init__(self, tag: RingTag, body=None):
        self.tag = tag
        acc = {}
        for mono, poly in (body.items() if isinstance(body, dict) else (body or ())):
            mono = tuple(sorted(mono))
            prev = acc.get(mono)
            acc[mono] = poly if prev is None else prev + poly
        items = tuple(sorted((m, p) for m, p in acc.items() if p))
        if not tag.localized:
            for _, p in items:
                if p.min_exp() < 0:
                    raise TagMismatch(f"negative power of L in non-localized ring {tag}")
        self.body = items

    # constructors
    @classmethod
    def zero(cls, tag=K0):
        return cls(tag)

    @classmethod
    def const(cls, c, tag=K0):
        return cls(tag, {(): LefschetzPoly.const(c)})

    @classmethod
    def one(cls, tag=K0):
        return cls.const(1, tag)

    @classmethod
    def lefschetz(cls, e=1, tag=K0):
        return cls(tag, {(): LefschetzPoly.L(e)})

    @classmethod
    def symbol(cls, name, tag=K0, power=1):
        return cls(tag, {(name,) * power: LefschetzPoly.const(1)})

    @classmethod
    def projective_space(cls, n, tag=K0):
        return cls(tag, {(): LefschetzPoly({i: 1 for i in range(n + 1)})})

    # inspection
    def symbols(self):
        return sorted({s for mono, _ in self.body for s in mono})

    def is_zero(self):
        return not self.body

    def coefficient(self, monomial=()):
        for m, p in self.body:
            if m == tuple(sorted(monomial)):
                return p
        return LefschetzPoly()

    def min_exp(self):
        return min((p.min_exp() for _, p in self.body), default=0)

    # arithmetic
    def _lift(self, other):
        if isinstance(other, int):
            return MotivicClass.const(other, self.tag)
        if not isinstance(other, MotivicClass):
            return NotImplemented
        if other.tag != self.tag:
            raise TagMismatch(f"{self.tag} vs {other.tag}")
        return other

    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        d = dict(self.body)
        for m, p in other.body:
            d[m] = d[m] + p if m in d else p
        return MotivicClass(self.tag, d)

    __radd__ = __add__

    def __neg__(self):
        return MotivicClass(self.tag, {m: -p for m, p in self.body})

    def __sub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        d = {}
        for m1, p1 in self.body:
            for m2, p2 in other.body:
                m = tuple(sorted(m1 + m2))
                prod_ = p1 * p2
                d[m] = d[m] + prod_ if m in d else prod_
        return MotivicClass(self.tag, d)

    __rmul__ = __mul__

    def __pow__(self, e):
        if e < 0:
            raise ValueError("negative powers of classes are not defined")
        r = MotivicClass.one(self.tag)
        for _ in range(e):
            r = r * self
        return r

    def __eq__(self, other):
        if isinstance(other, int):
            other = MotivicClass.const(other, self.tag)
        if not isinstance(other, MotivicClass):
            return NotImplemented
        return self.tag == other.tag and self.body == other.body

    def __hash__(self):
        return hash((self.tag, self.body))

    def same_body(self, other):
        """Canonical-form equality ignoring the ring tag."""
        return self.body == other.body

    def coerce(self, tag):
        if not _coercible(self.tag, tag):
            raise TagMismatch(f"no coercion {self.tag} -> {tag}")
        return MotivicClass(tag, self.body)

    def retag(self, tag):
        """Unchecked re-tagging (used by ring homomorphisms that change rings)."""
        return MotivicClass(tag, self.body)

    def map_symbols(self, fn, tag):
        """Ring map fixing L and sending each symbol s to ``fn(s)`` (a class of ``tag``)."""
        out = MotivicClass.zero(tag)
        cache = {}
        for mono, poly in self.body:
            term = MotivicClass(tag, {(): poly})
            for s in mono:
                if s not in cache:
                    cache[s] = fn(s)
                term = term * cache[s]
            out = out + term
        return out

    # io
    def to_document(self):
        return {
            "ring_tag": str(self.tag),
            "terms": [{"symbols": list(m), "coeffs": [list(t) for t in p.terms]} for m, p in self.body],
        }

    @classmethod
    def from_document(cls, doc):
        try:
            tag = RingTag.parse(doc["ring_tag"])
            body = {}
            for t in doc["terms"]:
                mono = tuple(sorted(str(s) for s in t["symbols"]))
                poly = LefschetzPoly({int(e): int(c) for e, c in t["coeffs"]})
                body[mono] = body[mono] + poly if mono in body else poly
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"malformed class document: {exc}") from exc
        return cls(tag, body)

    def dumps(self):
        return dumps(self.to_document())

    @classmethod
    def loads(cls, s):
        try:
            doc = json.loads(s)
        except json.JSONDecodeError as exc:
            raise ParseError(str(exc)) from exc
        return cls.from_document(doc)

    def __repr__(self):
        return f"MotivicClass({self.tag}: {self})"

    def __str__(self):
        if not self.body:
            return "0"
        parts = []
        for mono, poly in self.body:
            sym = "*".join(f"[{s}]" for s in mono)
            if not sym:
                parts.append(str(poly))
            elif poly == LefschetzPoly.const(1):
                parts.append(sym)
            elif len(poly.terms) == 1 and poly.terms[0][1] == 1:
                parts.append(f"{poly}*{sym}")
            else:
                parts.append(f"({poly})*{sym}")
        return " + ".join(parts)


def dumps(doc):
    return json.dumps(doc, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def one_minus_L_power(k, tag):
    """(1 - L)^k expanded."""
    return MotivicClass(tag, {(): LefschetzPoly({i: (-1) ** i * comb(k, i) for i in range(k + 1)})})


# --- the operations -------------------------------------------------------------

def add(a, b):
    return a + b


def mul(a, b):
    return a * b


def mod_L(a: MotivicClass) -> MotivicClass:
    """Substitute L := 0; the result is tagged as a residue modulo L."""
    if a.tag.residue:
        return a
    for mono, poly in a.body:
        if poly.min_exp() < 0:
            raise NegativeExponent(f"term {poly} * {mono} is not visibly in the image of K_0")
    tag = RingTag(a.tag.base, a.tag.mod, a.tag.mu, residue=True)
    return MotivicClass(tag, {m: LefschetzPoly.const(p.as_dict().get(0, 0)) for m, p in a.body})


# --- realizations -----------------------------------------------------------------

class UVPoly:
    """Laurent polynomials in u, v with integer coefficients (Hodge–Deligne target)."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        terms = terms or {}
        self.terms = {k: c for k, c in terms.items() if c}

    @classmethod
    def const(cls, c):
        return cls({(0, 0): c})

    @classmethod
    def uv(cls):
        return cls({(1, 1): 1})

    def _lift(self, other):
        return UVPoly.const(other) if isinstance(other, int) else other

    def __add__(self, other):
        other = self._lift(other)
        d = dict(self.terms)
        for k, c in other.terms.items():
            d[k] = d.get(k, 0) + c
        return UVPoly(d)

    __radd__ = __add__

    def __neg__(self):
        return UVPoly({k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __mul__(self, other):
        other = self._lift(other)
        d = {}
        for (a, b), c in self.terms.items():
            for (x, y), e in other.terms.items():
                k = (a + x, b + y)
                d[k] = d.get(k, 0) + c * e
        return UVPoly(d)

    __rmul__ = __mul__

    def inverse(self):
        if len(self.terms) != 1:
            raise ZeroDivisionError("only monomials are invertible")
        ((a, b), c), = self.terms.items()
        if c not in (1, -1):
            raise ZeroDivisionError("non-unit coefficient")
        return UVPoly({(-a, -b): c})

    def __eq__(self, other):
        other = self._lift(other)
        return isinstance(other, UVPoly) and self.terms == other.terms

    def __hash__(self):
        return hash(tuple(sorted(self.terms.items())))

    def mod_uv(self):
        """Residue modulo the ideal (uv)."""
        return UVPoly({k: c for k, c in self.terms.items() if not (k[0] >= 1 and k[1] >= 1)})

    def __repr__(self):
        if not self.terms:
            return "0"
        out = []
        for (a, b), c in sorted(self.terms.items(), reverse=True):
            mono = "".join(s if e == 1 else f"{s}^{e}" for s, e in (("u", a), ("v", b)) if e)
            out.append(f"{c}" if not mono else (mono if c == 1 else f"{c}*{mono}"))
        return " + ".join(out)


@dataclass
class RealizationSpec:
    """Images of L and of the symbols in a target ring ("integer" or "uv")."""

    L_image: object
    symbol_images: dict = field(default_factory=dict)
    target: str = "integer"

    @classmethod
    def point_count(cls, q, symbol_images=None):
        return cls(q, dict(symbol_images or {}), "integer")

    @classmethod
    def hodge_deligne(cls, symbol_images=None):
        return cls(UVPoly.uv(), dict(symbol_images or {}), "uv")

    @property
    def one(self):
        return 1 if self.target == "integer" else UVPoly.const(1)

    def residue(self, value):
        """Value modulo the image of L."""
        if self.target == "integer":
            return value % self.L_image
        return value.mod_uv()


def realize(a: MotivicClass, spec: RealizationSpec):
    """Ring-homomorphic image of ``a``: L -> L_image, symbols -> their images."""
    one = spec.one
    acc = 0 * one
    for mono, poly in a.body:
        term = poly.evaluate(spec.L_image, one)
        for s in mono:
            if s not in spec.symbol_images:
                raise MissingSymbolImage(s)
            term = term * spec.symbol_images[s]
        acc = acc + term
    if isinstance(acc, Fraction) and acc.denominator == 1:
        acc = int(acc)
    return acc


# --- sessions: symbol tables, scissors rules, aliases -------------------------------

class Session:
    """Symbol table with oriented scissors rules and universal-homeomorphism aliases.

    Not safe to mutate from several threads at once; canonicalization itself is
    read-only.
    """

    def __init__(self):
        self.symbols: dict[str, StratumSymbol] = {}
        self.rules: dict[str, MotivicClass] = {}
        self.aliases: dict[str, str] = {}

    def declare(self, name, action_tag=None, metadata=""):
        sym = StratumSymbol(name, action_tag, metadata)
        old = self.symbols.get(name)
        if old is not None and old != sym:
            raise SymbolAlreadyDefined(name)
        self.symbols[name] = sym
        return sym

    def symbol_class(self, name, tag=K0):
        if name not in self.symbols:
            self.declare(name)
        return MotivicClass.symbol(name, tag)

    def action_tag(self, name):
        sym = self.symbols.get(name)
        if sym is None:
            raise UnknownSymbol(name)
        return sym.action_tag

    def _reach(self, name, seen=None):
        """Symbols reachable from ``name`` through rules and aliases."""
        seen = set() if seen is None else seen
        stack = [name]
        while stack:
            s = stack.pop()
            nxt = []
            if s in self.rules:
                nxt = self.rules[s].symbols()
            elif s in self.aliases:
                nxt = [self.aliases[s]]
            for t in nxt:
                if t not in seen:
                    seen.add(t)
                    stack.append(t)
        return seen

    def scissors(self, total, closed: MotivicClass, open_: MotivicClass):
        """Register  [total] := closed + open  as an oriented rewrite rule."""
        if closed.tag != open_.tag:
            raise TagMismatch(f"{closed.tag} vs {open_.tag}")
        if total in self.rules or total in self.aliases:
            raise SymbolAlreadyDefined(total)
        body = closed + open_
        for s in body.symbols():
            if s == total or total in self._reach(s, {s}):
                raise CircularDefinition(f"[{total}] would depend on itself through [{s}]")
        if total not in self.symbols:
            self.declare(total)
        for s in body.symbols():
            if s not in self.symbols:
                self.declare(s)
        self.rules[total] = body
        return body

    def define(self, name, value: MotivicClass):
        """Shorthand for a rule with an empty closed part."""
        return self.scissors(name, MotivicClass.zero(value.tag), value)

    def alias(self, name, target, tag: RingTag):
        """Identify [name] with [target] (a universal homeomorphism); *_mod rings only."""
        if not tag.mod:
            raise TagMismatch(f"aliases only live in modified rings, not {tag}")
        if name in self.rules or name in self.aliases:
            raise SymbolAlreadyDefined(name)
        if name == target or name in self._reach(target, {target}):
            raise CircularDefinition(f"alias {name} -> {target} is circular")
        for s in (name, target):
            if s not in self.symbols:
                self.declare(s)
        self.aliases[name] = target

    def _expansion(self, s, tag):
        if s in self.rules:
            return self.rules[s].retag(tag)
        if tag.mod and s in self.aliases:
            return MotivicClass.symbol(self.aliases[s], tag)
        return None

    def _rewritable(self, s, tag):
        return s in self.rules or (tag.mod and s in self.aliases)

    def canonicalize(self, a: MotivicClass, rng: random.Random | None = None) -> MotivicClass:
        """Apply rules until no defined symbol remains.

        With ``rng`` one occurrence is rewritten at a time in random order; the
        result is the same (used to test confluence).
        """
        tag = a.tag
        if rng is None:
            while any(self._rewritable(s, tag) for s in a.symbols()):
                a = a.map_symbols(
                    lambda s: self._expansion(s, tag) or MotivicClass.symbol(s, tag), tag)
            return a
        while True:
            targets = [(m, p) for m, p in a.body if any(self._rewritable(s, tag) for s in m)]
            if not targets:
                return a
            mono, poly = rng.choice(targets)
            idx = rng.choice([i for i, s in enumerate(mono) if self._rewritable(s, tag)])
            rest = mono[:idx] + mono[idx + 1:]
            replaced = MotivicClass(tag, {rest: poly}) * self._expansion(mono[idx], tag)
            a = a - MotivicClass(tag, {mono: poly}) + replaced

    def classes_equal(self, a, b):
        return self.canonicalize(a) == self.canonicalize(b)


def scissors(session: Session, total, closed, open_):
    return session.scissors(total, closed, open_)


def all_monomials(names, max_degree):
    for k in range(max_degree + 1):
        for combo in product(names, repeat=k):
            yield tuple(sorted(combo))
