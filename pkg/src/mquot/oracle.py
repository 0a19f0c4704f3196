"""Brute-force point counts of quotients A^d_K / G over finite fields.

A point of V = A^d_K over F = F_{q^N} (V viewed as a k-scheme) is a pair
``(j, v)``: the embedding τ_j = φ^j ∘ ι of K into F, with φ the q-Frobenius,
and the coordinate vector v ∈ F^d.  A group element g = (e, A, a) pulls a point
back along its coordinate-ring map:

    (j, v) · g = (j + e,  τ_j(A) v + τ_j(a)),

and the q^m-Frobenius sends (j, v) to (j + m, φ^m(v)).  F-points of the
quotient are counted as Frobenius-stable G-orbits.  Every point of such an
orbit satisfies F(P) = P · g for some g, so the orbits are found by solving
these twisted-linear equations over F = F_{q^N}, N = lcm(n, m · exp(G)); a
solution v is fixed by φ^{m·ord(g)}, hence lies in F_{q^{m·exp(G)}}.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from math import lcm

from . import gfq, linalg
from .action import SemiLinearAffineAction
from .errors import BudgetExceeded


@dataclass(frozen=True)
class Budget:
    max_degree: int = 64  # degree of the enumeration field over F_p
    max_points: int = 200_000


@dataclass
class OracleReport:
    count: int
    m: int
    N: int
    method: str
    points: int
    burnside: object  # (1/|G|) Σ_g |X_g| as a Fraction-free integer when it divides
    fixed_sizes: dict = field(default_factory=dict)
    orbit_sizes: dict = field(default_factory=dict)

    def to_record(self):
        return {"count": self.count, "m": self.m, "N": self.N, "method": self.method,
                "points": self.points, "burnside": self.burnside,
                "orbit_sizes": {str(k): v for k, v in sorted(self.orbit_sizes.items())}}


@dataclass(frozen=True)
class StabilizerDatum:
    point: tuple
    words: tuple
    orbit_size: int
    group_order: int

    @property
    def consistent(self):
        return self.orbit_size * len(self.words) == self.group_order


def enumeration_degree(a: SemiLinearAffineAction, m: int) -> int:
    """N such that every point of a Frobenius^m-stable orbit is defined over F_{q^N}."""
    return lcm(a.n, m * a.group.exponent)


class PointSpace:
    """Points of V over F_{q^N} and the G- and Frobenius actions on them."""

    def __init__(self, a: SemiLinearAffineAction, N: int):
        if N % a.n:
            raise ValueError("the enumeration field must contain K")
        self.a = a
        self.N = N
        self.tower = gfq.tower(a.p, (a.f, a.f * a.n, a.f * N))
        self.F = self.tower.field(2)
        self._iota = self.tower.embedding_matrix(1, 2)
        self._cache = {}
        self.elements = a.elements()

    def tau(self, c, j):
        F = self.F
        return F.frob(F.apply(self._iota, c), self.a.f * (j % self.a.n))

    def _data(self, key, g, j):
        ck = (key, j % self.a.n)
        if ck not in self._cache:
            A = [[self.tau(c, j) for c in row] for row in g.matrix]
            t = [self.tau(c, j) for c in g.translation]
            self._cache[ck] = (A, t)
        return self._cache[ck]

    def act(self, P, g, key):
        j, v = P
        A, t = self._data(key, g, j)
        F = self.F
        w = tuple(F.add(x, y) for x, y in zip(linalg.matvec(A, v, F), t))
        return ((j + g.twist) % self.a.n, w)

    def act_generator(self, P, i):
        return self.act(P, self.a.generators[i], ("gen", i))

    def act_word(self, P, word, g):
        return self.act(P, g, ("word", word))

    def frobenius(self, P, m):
        j, v = P
        return ((j + m) % self.a.n, tuple(self.F.frob(x, self.a.f * m) for x in v))

    def orbit(self, P):
        seen = {P}
        stack = [P]
        while stack:
            Q = stack.pop()
            for i in range(len(self.a.generators)):
                R = self.act_generator(Q, i)
                if R not in seen:
                    seen.add(R)
                    stack.append(R)
        return seen

    def twisted_fixed_points(self, word, g, m, j):
        """All v with φ^m(v) = τ_j(A_g) v + τ_j(a_g) (empty unless e_g ≡ m mod n)."""
        a, F = self.a, self.F
        if (g.twist - m) % a.n:
            return []
        Fp = gfq.prime_field(a.p)
        D, d = F.D, a.d
        if d == 0:
            return [()]
        A, t = self._data(("word", word), g, j)
        cols = []
        for idx in range(d * D):
            flat = [0] * (d * D)
            flat[idx] = 1
            v = [tuple(flat[i * D:(i + 1) * D]) for i in range(d)]
            Av = linalg.matvec(A, v, F)
            img = [F.sub(F.frob(x, a.f * m), y) for x, y in zip(v, Av)]
            cols.append([c for e in img for c in e])
        rows = [list(r) for r in zip(*cols)]
        rhs = [c for e in t for c in e]
        base = linalg.solve(rows, rhs, Fp, ncols=d * D)
        if base is None:
            return []
        kernel = linalg.nullspace(rows, d * D, Fp)
        out = []
        p = a.p
        for coeffs in itertools.product(range(p), repeat=len(kernel)):
            v = list(base)
            for c, kv in zip(coeffs, kernel):
                if c:
                    v = [(x + c * y) % p for x, y in zip(v, kv)]
            out.append(tuple(tuple(v[i * D:(i + 1) * D]) for i in range(d)))
        return out

    def all_points(self):
        F, a = self.F, self.a
        for j in range(a.n):
            for v in itertools.product(list(F.elements()), repeat=a.d):
                yield (j, tuple(v))


def _check_budget(a, m, N, budget, points):
    if a.f * N > budget.max_degree:
        raise BudgetExceeded(f"enumeration field F_{a.q}^{N} has degree {a.f * N} > {budget.max_degree}",
                             required=N)
    if points > budget.max_points:
        raise BudgetExceeded(f"{points} points exceed the budget of {budget.max_points}", required=N)


def oracle_report(a: SemiLinearAffineAction, m: int, budget: Budget = Budget(),
                  method: str = "fixed-point") -> OracleReport:
    if m < 1:
        raise ValueError("m must be positive")
    N = enumeration_degree(a, m)
    if method == "enumerate":
        total = a.n * a.q ** (N * a.d)
        _check_budget(a, m, N, budget, total)
        S = PointSpace(a, N)
        seen, count, sizes = set(), 0, {}
        for P in S.all_points():
            if P in seen:
                continue
            orb = S.orbit(P)
            seen |= orb
            if S.frobenius(P, m) in orb:
                count += 1
                sizes[len(orb)] = sizes.get(len(orb), 0) + 1
        return OracleReport(count, m, N, method, total, None, {}, sizes)
    if method != "fixed-point":
        raise ValueError(f"unknown oracle method {method!r}")
    S, points, fixed, orbits = stable_orbits(a, m, budget)
    sizes = {}
    for orb in orbits:
        sizes[len(orb)] = sizes.get(len(orb), 0) + 1
    s = sum(fixed.values())
    burnside = s // a.group.order if s % a.group.order == 0 else f"{s}/{a.group.order}"
    return OracleReport(len(orbits), m, N, method, len(points), burnside, fixed, sizes)


def stable_orbits(a: SemiLinearAffineAction, m: int, budget: Budget = Budget()):
    """``(PointSpace, stable points, |X_g| per word, orbits)`` for the q^m-Frobenius."""
    N = enumeration_degree(a, m)
    valid = [w for w in a.group.words() if (a.element(w).twist - m) % a.n == 0]
    _check_budget(a, m, N, budget, len(valid) * a.n * a.q ** (m * a.d))
    S = PointSpace(a, N)
    points, fixed = set(), {}
    for w, g in S.elements:
        total = 0
        for j in range(a.n):
            sols = S.twisted_fixed_points(w, g, m, j)
            total += len(sols)
            points.update((j, v) for v in sols)
        fixed[w] = total
    seen, orbits = set(), []
    for P in sorted(points):
        if P in seen:
            continue
        orb = S.orbit(P)
        if not orb <= points:  # pragma: no cover - would contradict commutation of F and G
            raise AssertionError("orbit of a Frobenius-stable point left the stable set")
        seen |= orb
        orbits.append(orb)
    return S, points, fixed, orbits


def orbit_count_oracle(a: SemiLinearAffineAction, m: int, budget: Budget = Budget(),
                       method: str = "fixed-point") -> int:
    """|(V/G)(F_{q^m})| as the number of Frobenius^m-stable G-orbits."""
    return oracle_report(a, m, budget, method).count


def stabilizer(a: SemiLinearAffineAction, point, N: int | None = None) -> StabilizerDatum:
    """Words of G fixing ``point = (j, v)`` with v over F_{q^N} (raw tuples)."""
    N = N or enumeration_degree(a, 1)
    S = PointSpace(a, N)
    point = (point[0] % a.n, tuple(tuple(c) for c in point[1]))
    if len(point[1]) != a.d or any(len(c) != S.F.D for c in point[1]):
        raise ValueError(f"point coordinates must be {a.d} elements of F_{a.q}^{N}")
    words, orbit = [], set()
    for w, g in S.elements:
        Q = S.act_word(point, w, g)
        orbit.add(Q)
        if Q == point:
            words.append(w)
    return StabilizerDatum(point, tuple(words), len(orbit), a.group.order)
