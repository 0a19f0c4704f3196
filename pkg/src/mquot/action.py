"""Finite abelian groups acting semi-linearly and affinely on A^d_K.

A generator datum ``(e, A, a)`` acts on the coordinate ring K[x_1..x_d] by

    x_i  ->  Σ_j A_ij x_j + a_i,      c -> σ^e(c) for c in K,

where σ is the |k|-power Frobenius of K = F_{|k|^n}.  Composition of ring
maps (first g', then g) is

    g ∘ g' = (e + e',  σ^e(A') · A,  σ^e(A') · a + σ^e(a')).

Generators are listed wild factors first, then tame factors, matching
``AbelianGroupSpec.orders``.  Field elements are raw coefficient tuples of K.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property, reduce
from math import gcd, lcm, prod

from . import gfq, linalg
from .errors import Inconsistent, MalformedAction, NormalizationFailed, ParseError
from .poly import Poly, affine_images


@dataclass(frozen=True)
class AbelianGroupSpec:
    wild_orders: tuple = ()
    tame_orders: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "wild_orders", tuple(int(o) for o in self.wild_orders))
        object.__setattr__(self, "tame_orders", tuple(int(o) for o in self.tame_orders))

    @property
    def orders(self):
        return self.wild_orders + self.tame_orders

    @property
    def order(self):
        return prod(self.orders)

    @property
    def tame_part(self):
        """q: the product of the tame orders."""
        return prod(self.tame_orders)

    @property
    def exponent(self):
        return reduce(lcm, self.orders, 1)

    @property
    def is_tame(self):
        return not self.wild_orders

    def wild_rank(self, p):
        """r with p^r the wild part of |G|."""
        r = 0
        for o in self.wild_orders:
            while o % p == 0:
                o //= p
                r += 1
        return r

    def words(self):
        return list(itertools.product(*(range(o) for o in self.orders)))

    def problems(self, p):
        out = []
        for o in self.wild_orders:
            if o < 2 or p ** round(_log(o, p)) != o:
                out.append(f"wild order {o} is not a positive power of p={p}")
        for o in self.tame_orders:
            if o < 2 or o % p == 0:
                out.append(f"tame order {o} is not coprime to p={p} (or is trivial)")
        return out


def _log(n, p):
    k = 0
    while n > 1 and n % p == 0:
        n //= p
        k += 1
    return k if n == 1 else -1


@dataclass(frozen=True)
class GeneratorDatum:
    twist: int
    matrix: tuple
    translation: tuple
    order: int = field(default=0, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "matrix", tuple(tuple(tuple(c) for c in row) for row in self.matrix))
        object.__setattr__(self, "translation", tuple(tuple(c) for c in self.translation))


@dataclass(frozen=True)
class ValidationReport:
    checks: tuple  # ((name, passed, message), ...)

    @property
    def ok(self):
        return all(passed for _, passed, _ in self.checks)

    @property
    def failed(self):
        return [name for name, passed, _ in self.checks if not passed]

    def messages(self):
        return [f"{name}: {msg}" for name, passed, msg in self.checks if not passed]

    def to_record(self):
        return {"ok": self.ok, "checks": {n: ok for n, ok, _ in self.checks},
                "messages": self.messages()}


@dataclass(frozen=True)
class ChangeOfCoordinates:
    """New coordinates z = P x - shift (P rows are linear forms over K)."""

    matrix: tuple
    shift: tuple

    def is_identity(self, F):
        d = len(self.matrix)
        return (all(self.matrix[i][j] == (F.one if i == j else F.zero) for i in range(d) for j in range(d))
                and all(F.is_zero(c) for c in self.shift))

    def forms(self, F):
        """The new coordinates as polynomials in the old ones."""
        return [Poly.linear(F, list(row), F.neg(s)) for row, s in zip(self.matrix, self.shift)]


NO_TRANSLATION_NEEDED = None


class SemiLinearAffineAction:
    """Generators (one per cyclic factor of ``group``) acting on A^d over K = F_{q^n}, k = F_q, q = p^f."""

    def __init__(self, p, k_degree, n, d, group: AbelianGroupSpec, generators, name=""):
        self.p, self.f, self.n, self.d = p, k_degree, n, d
        self.group = group
        self.generators = tuple(generators)
        self.name = name
        if len(self.generators) != len(group.orders):
            raise MalformedAction(f"{len(self.generators)} generators for {len(group.orders)} cyclic factors")
        D = self.K.D
        for g in self.generators:
            if len(g.matrix) != d or any(len(r) != d for r in g.matrix) or len(g.translation) != d:
                raise MalformedAction(f"generator data do not match dimension {d}")
            for c in itertools.chain(itertools.chain.from_iterable(g.matrix), g.translation):
                if len(c) != D or any(not 0 <= x < p for x in c):
                    raise MalformedAction(f"{c} is not an element of F_{p}^{D}")

    # fields
    @cached_property
    def tower(self):
        return gfq.tower(self.p, (self.f, self.f * self.n))

    @property
    def K(self):
        return self.tower.field(1)

    @property
    def k(self):
        return self.tower.field(0)

    @property
    def q(self):
        return self.p ** self.f

    def sigma(self, c, e=1):
        """c -> c^{q^e} on K."""
        return self.K.frob(c, self.f * (e % self.n))

    def k_element(self, raw_k):
        """Embed an element of k into K."""
        return self.tower.embed_raw(tuple(raw_k), 0, 1)

    def in_subfield(self, c, n_sub):
        """Whether c lies in F_{q^n_sub} ⊆ K."""
        return self.sigma(c, n_sub) == c

    # generator algebra
    def identity(self):
        K = self.K
        return GeneratorDatum(0, linalg.identity(self.d, K), (K.zero,) * self.d, 1)

    def compose(self, g1: GeneratorDatum, g2: GeneratorDatum) -> GeneratorDatum:
        """g1 ∘ g2 as maps of the coordinate ring (apply g2 first)."""
        K = self.K
        sA2 = [[self.sigma(c, g1.twist) for c in row] for row in g2.matrix]
        A = linalg.matmul(sA2, g1.matrix, K)
        a = [K.add(x, self.sigma(y, g1.twist))
             for x, y in zip(linalg.matvec(sA2, g1.translation, K), g2.translation)]
        return GeneratorDatum((g1.twist + g2.twist) % self.n, A, a)

    def power(self, g, k):
        r = self.identity()
        for _ in range(k):
            r = self.compose(r, g)
        return r

    def element(self, word):
        r = self.identity()
        for g, k in zip(self.generators, word):
            r = self.compose(r, self.power(g, k))
        return r

    def elements(self):
        """All (word, datum) pairs, words in lexicographic order."""
        return [(w, self.element(w)) for w in self.group.words()]

    def is_identity(self, g):
        return g.twist % self.n == 0 and g == GeneratorDatum(0, self.identity().matrix, self.identity().translation)

    def act_on_poly(self, g, poly: Poly) -> Poly:
        """g*(poly) for a polynomial in x_1..x_d over K."""
        return poly.substitute(affine_images(self.K, g.matrix, g.translation),
                               coeff_map=lambda c: self.sigma(c, g.twist))

    def coordinate(self, i):
        return Poly.var(self.K, self.d, i)

    def with_generators(self, generators, name=None):
        return SemiLinearAffineAction(self.p, self.f, self.n, self.d, self.group, generators,
                                      self.name if name is None else name)

    # io
    def to_document(self):
        return {
            "name": self.name,
            "tower": {"p": self.p, "degrees": [self.f, self.f * self.n]},
            "group": {"wild_orders": list(self.group.wild_orders), "tame_orders": list(self.group.tame_orders)},
            "dimension": self.d,
            "generators": [{"twist_exp": g.twist, "matrix": [[list(c) for c in row] for row in g.matrix],
                            "translation": [list(c) for c in g.translation], "order": o}
                           for g, o in zip(self.generators, self.group.orders)],
        }

    @classmethod
    def from_document(cls, doc):
        try:
            p = int(doc["tower"]["p"])
            f, D = (int(x) for x in doc["tower"]["degrees"])
            if D % f:
                raise MalformedAction("degrees must be [deg k, deg K] with deg k | deg K")
            group = AbelianGroupSpec(doc["group"].get("wild_orders", []), doc["group"].get("tame_orders", []))
            gens = [GeneratorDatum(int(g.get("twist_exp", 0)), g["matrix"], g["translation"],
                                   int(g.get("order", 0)))
                    for g in doc["generators"]]
            d = int(doc["dimension"])
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"malformed action document: {exc}") from exc
        return cls(p, f, D // f, d, group, gens, doc.get("name", ""))

    def __repr__(self):
        return (f"SemiLinearAffineAction({self.name!r}, p={self.p}, q={self.q}, n={self.n}, d={self.d}, "
                f"orders={self.group.orders})")


def compose(action, g1, g2):
    return action.compose(g1, g2)


# --- validation ----------------------------------------------------------------

def validate(a: SemiLinearAffineAction) -> ValidationReport:
    checks = []
    probs = a.group.problems(a.p)
    for g, o in zip(a.generators, a.group.orders):
        if g.order and g.order != o:
            probs.append(f"generator declares order {g.order} but its factor has order {o}")
    checks.append(("group-spec", not probs, "; ".join(probs)))

    bad = [i for i, (g, o) in enumerate(zip(a.generators, a.group.orders)) if not a.is_identity(a.power(g, o))]
    checks.append(("orders", not bad, f"generators {bad} do not satisfy g^order = 1"))

    pairs = [(i, j) for i, j in itertools.combinations(range(len(a.generators)), 2)
             if a.compose(a.generators[i], a.generators[j]) != a.compose(a.generators[j], a.generators[i])]
    checks.append(("commutativity", not pairs,
                   f"generator pairs {pairs} do not commute; non-abelian groups are not supported"))

    g = gcd(a.n, *(gen.twist for gen in a.generators)) if a.generators else a.n
    checks.append(("twist-surjectivity", g == 1,
                   f"twists generate an index-{g} subgroup of Gal(K/k) = Z/{a.n}"))

    qt = a.group.tame_part
    ok = (a.q - 1) % qt == 0 if all(o % a.p for o in a.group.tame_orders) else False
    checks.append(("roots-of-unity", ok, f"k = F_{a.q} lacks the {qt}-th roots of unity"))
    return ValidationReport(tuple(checks))


# --- normal form ----------------------------------------------------------------

def _flat(c):
    return [x for e in c for x in e]


def _unflat(v, D):
    return tuple(tuple(v[i * D:(i + 1) * D]) for i in range(len(v) // D))


def _linear_part_matrix(a, g):
    """F_p-matrix (acting on column vectors) of the linear-form map c -> σ(c) A."""
    K, d = a.K, a.d
    D = K.D
    cols = []
    for i in range(d * D):
        v = [0] * (d * D)
        v[i] = 1
        c = _unflat(v, D)
        sc = [a.sigma(x, g.twist) for x in c]
        img = [reduce(K.add, (K.mul(sc[j], g.matrix[j][col]) for j in range(d)), K.zero) for col in range(d)]
        cols.append(_flat(img))
    return [list(r) for r in zip(*cols)]


def _mul_by_k(a, mu):
    """F_p-matrix of c -> μ c on K^d."""
    K = a.K
    block = K.mul_matrix(mu)
    D, d = K.D, a.d
    M = [[0] * (D * d) for _ in range(D * d)]
    for b in range(d):
        for i in range(D):
            for j in range(D):
                M[b * D + i][b * D + j] = block[i][j]
    return M


def _span_basis(vectors, Fp):
    if not vectors:
        return []
    R, _ = linalg.rref(vectors, Fp)
    return R


def _annihilator(U, dim, Fp):
    """Rows Q with Q v = 0 iff v in span(U)."""
    if not U:
        return linalg.identity(dim, Fp)
    return linalg.nullspace(U, dim, Fp)


def roots_of_unity_in_k(a, order):
    k = a.k
    return sorted((x for x in k.elements() if not k.is_zero(x) and k.pow(x, order) == k.one), key=k.to_int)


def is_normalized(a: SemiLinearAffineAction) -> bool:
    K, d = a.K, a.d
    nw = len(a.group.wild_orders)
    for idx, g in enumerate(a.generators):
        for i in range(d):
            for j in range(d):
                c = g.matrix[i][j]
                if idx < nw:
                    want_zero = j > i
                    if i == j and c != K.one:
                        return False
                    if want_zero and not K.is_zero(c):
                        return False
                elif i != j and not K.is_zero(c):
                    return False
        if idx >= nw:
            o = a.group.orders[idx]
            for i in range(d):
                mu = g.matrix[i][i]
                if not a.in_subfield(mu, 1) or K.pow(mu, o) != K.one:
                    return False
    return True


def normalize(a: SemiLinearAffineAction):
    """Change coordinates so wild generators are unitriangular and tame ones diagonal.

    Works on the k-structure of the space of linear forms (dimension n·d over k,
    handled as an F_p-space).  Returns ``(normalized action, ChangeOfCoordinates)``.
    """
    K, d, p = a.K, a.d, a.p
    zero_shift = (K.zero,) * d
    if d == 0 or is_normalized(a):
        return a, ChangeOfCoordinates(tuple(map(tuple, linalg.identity(d, K))), zero_shift)
    Fp = gfq.prime_field(p)
    D = K.D
    dim = D * d
    nw = len(a.group.wild_orders)
    T = [_linear_part_matrix(a, g) for g in a.generators]
    wild_T, tame_T = T[:nw], T[nw:]

    # joint eigenspaces of the tame generators
    choices = [[a.k_element(mu) for mu in roots_of_unity_in_k(a, o)] for o in a.group.tame_orders]
    spaces = []
    for chars in itertools.product(*choices) if choices else [()]:
        rows = []
        for Tl, mu in zip(tame_T, chars):
            S = _mul_by_k(a, mu)
            rows += [[(x - y) % p for x, y in zip(r1, r2)] for r1, r2 in zip(Tl, S)]
        E = linalg.nullspace(rows, dim, Fp) if rows else linalg.identity(dim, Fp)
        if E:
            spaces.append((chars, E))
    if sum(len(E) for _, E in spaces) != dim:
        raise NormalizationFailed("tame generators are not simultaneously diagonalizable over k",
                                  witness={"eigenspace_dims": [len(E) for _, E in spaces], "dim": dim})

    # inside each eigenspace, a flag stable under the (unipotent) wild generators
    ordered = []
    for chars, E in spaces:
        U = []
        while len(U) < len(E):
            Q = _annihilator(U, dim, Fp)
            rows = []
            for Tw in wild_T:
                N = [[(x - (1 if i == j else 0)) % p for j, x in enumerate(row)] for i, row in enumerate(Tw)]
                NE = linalg.transpose([linalg.matvec(N, e, Fp) for e in E])
                rows += linalg.matmul(Q, NE, Fp) if Q else []
            S = linalg.nullspace(rows, len(E), Fp) if rows else linalg.identity(len(E), Fp)
            level = [reduce(lambda u, v: [(x + y) % p for x, y in zip(u, v)],
                            ([s * x % p for x in e] for s, e in zip(coeffs, E))) for coeffs in S]
            new = []
            for v in _span_basis(level, Fp):
                if not linalg.in_span(U + new, v, Fp):
                    new.append(v)
            if not new:
                raise NormalizationFailed("wild generators are not unipotent on an eigenspace",
                                          witness={"characters": [K.to_int(c) for c in chars]})
            U += new
            ordered += new

    # greedy choice of a K-basis among the ordered k-vectors
    rows = []
    for v in ordered:
        lead = next(x for x in v if x)
        s = pow(lead, p - 2, p)
        form = _unflat([x * s % p for x in v], D)
        if linalg.rank(rows + [list(form)], K) > len(rows):
            rows.append(list(form))
        if len(rows) == d:
            break
    if len(rows) < d:  # pragma: no cover - the k-span of W is W
        raise NormalizationFailed("could not extract a K-basis", witness={"rank": len(rows)})

    P = rows
    Pinv = linalg.inverse(P, K)
    gens = []
    for g in a.generators:
        sP = [[a.sigma(c, g.twist) for c in row] for row in P]
        A = linalg.matmul(linalg.matmul(sP, g.matrix, K), Pinv, K)
        t = linalg.matvec(sP, g.translation, K)
        gens.append(GeneratorDatum(g.twist, A, t, g.order))
    out = a.with_generators(gens)
    if not is_normalized(out):  # pragma: no cover
        raise NormalizationFailed("change of basis did not reach the normal form", witness={"P": P})
    return out, ChangeOfCoordinates(tuple(map(tuple, P)), zero_shift)


def tame_fixed_point(a: SemiLinearAffineAction):
    """A point c ∈ K^d with σ_l(c) = A_l c + a_l for every tame generator.

    Shifting coordinates by c removes all tame translations.  Returns
    ``NO_TRANSLATION_NEEDED`` (None) when they are already zero.
    """
    K, d, p = a.K, a.d, a.p
    nw = len(a.group.wild_orders)
    tame = a.generators[nw:]
    if all(K.is_zero(c) for g in tame for c in g.translation):
        return NO_TRANSLATION_NEEDED
    Fp = gfq.prime_field(p)
    D = K.D
    rows, rhs = [], []
    for g in tame:
        cols = []
        for i in range(d * D):
            v = [0] * (d * D)
            v[i] = 1
            c = _unflat(v, D)
            Ac = linalg.matvec(g.matrix, c, K)
            cols.append(_flat([K.sub(a.sigma(x, g.twist), y) for x, y in zip(c, Ac)]))
        rows += [list(r) for r in zip(*cols)]
        rhs += _flat(g.translation)
    sol = linalg.solve(rows, rhs, Fp, ncols=d * D)
    if sol is None:
        raise Inconsistent("tame generators have no common fixed point")
    return _unflat(sol, D)


def recenter(a: SemiLinearAffineAction, c):
    """The action in coordinates z = x - c: translations become A c + a - σ(c)."""
    K = a.K
    gens = []
    for g in a.generators:
        Ac = linalg.matvec(g.matrix, c, K)
        t = [K.sub(K.add(x, y), a.sigma(z, g.twist)) for x, y, z in zip(Ac, g.translation, c)]
        gens.append(GeneratorDatum(g.twist, g.matrix, t, g.order))
    return a.with_generators(gens)


def normal_form(a: SemiLinearAffineAction):
    """normalize followed by tame recentering; returns (action, ChangeOfCoordinates)."""
    b, change = normalize(a)
    c = tame_fixed_point(b)
    if c is NO_TRANSLATION_NEEDED:
        return b, change
    return recenter(b, c), ChangeOfCoordinates(change.matrix, tuple(c))
