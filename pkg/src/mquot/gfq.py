"""Exact arithmetic in finite fields and towers F_p ⊂ F_q ⊂ F_{q^n} ⊂ ...

Every level of a tower is stored as F_p[t]/(m(t)) with ``m`` the first monic
irreducible polynomial of the level's degree, where polynomials are enumerated
by the integer ``c_0 + c_1 p + ... + c_{D-1} p^{D-1}`` of their lower
coefficients.  Raw elements are tuples of ``D`` integers in ``[0, p)``, lowest
degree first.  ``FieldElement`` wraps a raw element together with its tower
level; arithmetic between different levels is refused.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property, lru_cache
from math import gcd

from sympy import factorint, isprime

from . import linalg
from .errors import (
    DivisionByZero,
    FieldBoundExceeded,
    LevelMismatch,
    NoSuchExtension,
    WildOrder,
)

MAX_PRIME = 13
MAX_DEGREE = 64


class PrimeField:
    """F_p with plain integers as elements; used for F_p-linear algebra."""

    def __init__(self, p):
        self.p = p
        self.zero = 0
        self.one = 1

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def neg(self, a):
        return -a % self.p

    def mul(self, a, b):
        return a * b % self.p

    def inv(self, a):
        if a % self.p == 0:
            raise DivisionByZero("inverse of 0")
        return pow(a, self.p - 2, self.p)

    def is_zero(self, a):
        return a % self.p == 0


@lru_cache(maxsize=None)
def prime_field(p):
    return PrimeField(p)


# --- polynomials over F_p as lists, lowest degree first ---------------------

def _ptrim(f):
    while f and f[-1] == 0:
        f.pop()
    return f


def _pmod(f, g, p):
    f = _ptrim([c % p for c in f])
    dg = len(g) - 1
    inv_lead = pow(g[-1], p - 2, p)
    while len(f) - 1 >= dg and f:
        c = f[-1] * inv_lead % p
        shift = len(f) - 1 - dg
        for i, gc in enumerate(g):
            f[shift + i] = (f[shift + i] - c * gc) % p
        _ptrim(f)
    return f


def _pmul(f, g, p):
    if not f or not g:
        return []
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                out[i + j] = (out[i + j] + a * b) % p
    return _ptrim(out)


def _psub(f, g, p):
    n = max(len(f), len(g))
    out = [((f[i] if i < len(f) else 0) - (g[i] if i < len(g) else 0)) % p for i in range(n)]
    return _ptrim(out)


def _pgcd(f, g, p):
    f, g = _ptrim(list(f)), _ptrim(list(g))
    while g:
        f, g = g, _pmod(f, g, p)
    return f


def _ppow_x(e, m, p):
    """x^e mod m."""
    result = [1]
    base = _pmod([0, 1], m, p)
    while e:
        if e & 1:
            result = _pmod(_pmul(result, base, p), m, p)
        base = _pmod(_pmul(base, base, p), m, p)
        e >>= 1
    return result


def is_irreducible(f, p):
    """Rabin's test for a monic polynomial ``f`` over F_p (coefficient list)."""
    D = len(f) - 1
    if D < 1:
        return False
    if D == 1:
        return True
    x = [0, 1]
    if _psub(_ppow_x(p ** D, f, p), x, p):
        return False
    for r in factorint(D):
        h = _psub(_ppow_x(p ** (D // r), f, p), x, p)
        if len(_pgcd(f, h, p)) != 1:
            return False
    return True


@lru_cache(maxsize=None)
def first_irreducible(p, D):
    for i in itertools.count():
        low = []
        n = i
        for _ in range(D):
            n, c = divmod(n, p)
            low.append(c)
        f = low + [1]
        if is_irreducible(f, p):
            return tuple(f)


# --- a single finite field ---------------------------------------------------

class FiniteField:
    """F_{p^D} = F_p[t]/(modulus). Elements are raw coefficient tuples."""

    def __init__(self, p, D, modulus=None):
        if not isprime(p):
            raise ValueError(f"{p} is not prime")
        self.p = p
        self.D = D
        self.modulus = tuple(modulus) if modulus is not None else first_irreducible(p, D)
        if len(self.modulus) != D + 1 or self.modulus[-1] != 1:
            raise ValueError("modulus must be monic of the field degree")
        if not is_irreducible(list(self.modulus), p):
            raise ValueError(f"modulus {self.modulus} is reducible over F_{p}")
        self.size = p ** D
        self.zero = (0,) * D
        self.one = (1,) + (0,) * (D - 1)
        # x^{D+k} mod modulus, for k = 0 .. D-2
        self._red = []
        cur = [(-c) % p for c in self.modulus[:-1]]
        for _ in range(max(D - 1, 0)):
            self._red.append(cur)
            nxt = [0] + cur[:-1]
            top = cur[-1]
            if top:
                for i in range(D):
                    nxt[i] = (nxt[i] - top * self.modulus[i]) % p
            cur = nxt
        self._frob_cache = {}

    def __repr__(self):
        return f"GF({self.p}^{self.D})"

    # arithmetic
    def add(self, a, b):
        p = self.p
        return tuple((x + y) % p for x, y in zip(a, b))

    def sub(self, a, b):
        p = self.p
        return tuple((x - y) % p for x, y in zip(a, b))

    def neg(self, a):
        p = self.p
        return tuple(-x % p for x in a)

    def is_zero(self, a):
        return not any(a)

    def scalar(self, c):
        return ((c % self.p),) + (0,) * (self.D - 1)

    def smul(self, c, a):
        p = self.p
        return tuple(c * x % p for x in a)

    def mul(self, a, b):
        p, D = self.p, self.D
        if D == 1:
            return (a[0] * b[0] % p,)
        prod = [0] * (2 * D - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    if bj:
                        prod[i + j] += ai * bj
        res = prod[:D]
        for k in range(D - 1):
            hi = prod[D + k] % p
            if hi:
                r = self._red[k]
                for t in range(D):
                    res[t] += hi * r[t]
        return tuple(x % p for x in res)

    def inv(self, a):
        if not any(a):
            raise DivisionByZero("inverse of 0")
        p = self.p
        # extended Euclid in F_p[t]
        r0, r1 = list(self.modulus), _ptrim(list(a))
        s0, s1 = [], [1]
        while len(r1) > 1:
            inv_lead = pow(r1[-1], p - 2, p)
            q = [0] * (len(r0) - len(r1) + 1)
            r = list(r0)
            while len(r) >= len(r1) and r:
                c = r[-1] * inv_lead % p
                shift = len(r) - len(r1)
                q[shift] = c
                for i, rc in enumerate(r1):
                    r[shift + i] = (r[shift + i] - c * rc) % p
                _ptrim(r)
            r0, r1 = r1, r
            s0, s1 = s1, _psub(s0, _pmul(q, s1, p), p)
        c = pow(r1[0], p - 2, p)
        s = [x * c % p for x in s1]
        s = s + [0] * (self.D - len(s))
        return tuple(s[: self.D])

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def pow(self, a, e):
        if e < 0:
            a, e = self.inv(a), -e
        result = self.one
        base = a
        while e:
            if e & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            e >>= 1
        return result

    # encoding and enumeration
    def to_int(self, a):
        n = 0
        for c in reversed(a):
            n = n * self.p + c
        return n

    def from_int(self, n):
        out = []
        for _ in range(self.D):
            n, c = divmod(n, self.p)
            out.append(c)
        return tuple(out)

    def elements(self):
        for n in range(self.size):
            yield self.from_int(n)

    def gen(self):
        """The class of t."""
        if self.D == 1:
            return ((-self.modulus[0]) % self.p,)
        return (0, 1) + (0,) * (self.D - 2)

    # F_p-linear structure
    def mul_matrix(self, c):
        """F_p-matrix (rows = output coords) of multiplication by ``c``."""
        cols = []
        basis = self.basis()
        for b in basis:
            cols.append(self.mul(c, b))
        return [list(r) for r in zip(*cols)]

    @cached_property
    def _basis(self):
        return [tuple(1 if i == j else 0 for i in range(self.D)) for j in range(self.D)]

    def basis(self):
        return self._basis

    def frob_matrix(self, k=1):
        """F_p-matrix of x -> x^{p^k}."""
        k %= self.D
        if k not in self._frob_cache:
            cols = [self.pow(b, self.p ** k) for b in self.basis()]
            self._frob_cache[k] = [list(r) for r in zip(*cols)]
        return self._frob_cache[k]

    def apply(self, M, a):
        p = self.p
        return tuple(sum(m * x for m, x in zip(row, a)) % p for row in M)

    def frob(self, a, k=1):
        """a -> a^{p^k}."""
        k %= self.D
        if k == 0:
            return a
        return self.apply(self.frob_matrix(k), a)

    def fixed_subfield_basis(self, k):
        """F_p-basis of {a : a^{p^k} = a}."""
        F = prime_field(self.p)
        M = [row[:] for row in self.frob_matrix(k)]
        for i in range(self.D):
            M[i][i] = (M[i][i] - 1) % self.p
        return [tuple(v) for v in linalg.nullspace(M, self.D, F)]

    # multiplicative structure
    def order(self, a):
        if not any(a):
            raise DivisionByZero("order of 0")
        n = self.size - 1
        for r, e in factorint(n).items():
            for _ in range(e):
                if self.pow(a, n // r) == self.one:
                    n //= r
                else:
                    break
        return n

    def sort_key(self, a):
        return self.to_int(a)


# --- towers ------------------------------------------------------------------

@dataclass(frozen=True)
class FrobeniusPower:
    """The automorphism x -> x^{|base|^exponent} of a level, exponent mod ``degree``."""

    exponent: int
    degree: int

    def __post_init__(self):
        object.__setattr__(self, "exponent", self.exponent % self.degree if self.degree else 0)

    def compose(self, other):
        if other.degree != self.degree:
            raise LevelMismatch("Frobenius powers over different extensions")
        return FrobeniusPower(self.exponent + other.exponent, self.degree)

    @property
    def is_identity(self):
        return self.exponent == 0


class FieldTower:
    """Chain F_{p^{D_0}} ⊂ F_{p^{D_1}} ⊂ ... with D_i | D_{i+1}.

    ``degrees`` are taken from the prime field, so ``FieldTower(2, [1, 2, 4])``
    is F_2 ⊂ F_4 ⊂ F_16.
    """

    def __init__(self, p, degrees, moduli=None, max_prime=MAX_PRIME, max_degree=MAX_DEGREE):
        degrees = list(degrees)
        if not degrees:
            raise ValueError("a tower needs at least one level")
        if p > max_prime:
            raise FieldBoundExceeded(f"characteristic {p} exceeds bound {max_prime}")
        if degrees[-1] > max_degree:
            raise FieldBoundExceeded(f"total degree {degrees[-1]} exceeds bound {max_degree}")
        for a, b in zip(degrees, degrees[1:]):
            if b % a:
                raise ValueError(f"degree {a} does not divide {b}")
        self.p = p
        self.degrees = degrees
        if moduli is None:
            self.fields = [FiniteField(p, D) for D in degrees]
        else:
            self.fields = [FiniteField(p, D, m) for D, m in zip(degrees, moduli)]
        self._step = [self._embedding_matrix(self.fields[i], self.fields[i + 1])
                      for i in range(len(degrees) - 1)]
        self._embed_cache = {}

    def __repr__(self):
        return f"FieldTower(p={self.p}, degrees={self.degrees})"

    def __len__(self):
        return len(self.fields)

    def field(self, level):
        return self.fields[level]

    def size(self, level):
        return self.fields[level].size

    def relative_degree(self, big, small):
        return self.degrees[big] // self.degrees[small]

    @staticmethod
    def _embedding_matrix(small, big):
        """F_p-matrix sending coords over ``small`` to coords over ``big``.

        The image of t is the first root of small's modulus among the powers
        u, u^2, ... of the first element u of order |small|-1 obtained as
        h^{(|big|-1)/(|small|-1)}, h running through big in integer order.
        """
        p = small.p
        if small.D == big.D and small.modulus == big.modulus:
            return linalg.identity(small.D, prime_field(p))
        if small.D == 1:
            root = big.scalar(-small.modulus[0])
        else:
            n_small = small.size - 1
            cof = (big.size - 1) // n_small
            u = None
            for h_int in range(2, big.size):
                cand = big.pow(big.from_int(h_int), cof)
                if big.order(cand) == n_small:
                    u = cand
                    break
            root = None
            w = u
            for _ in range(n_small):
                if _eval_in(big, small.modulus, w) == big.zero:
                    root = w
                    break
                w = big.mul(w, u)
            if root is None:  # pragma: no cover - would contradict field theory
                raise RuntimeError("no root of the subfield modulus found")
        cols = []
        cur = big.one
        for _ in range(small.D):
            cols.append(cur)
            cur = big.mul(cur, root)
        return [list(r) for r in zip(*cols)]

    def embed_raw(self, a, src, dst):
        if src == dst:
            return a
        if src > dst:
            raise LevelMismatch("can only embed into a larger level")
        for i in range(src, dst):
            a = self.fields[i + 1].apply(self._step[i], a)
        return a

    def embedding_matrix(self, src, dst):
        key = (src, dst)
        if key not in self._embed_cache:
            F = prime_field(self.p)
            M = linalg.identity(self.degrees[src], F)
            for i in range(src, dst):
                M = linalg.matmul(self._step[i], M, F)
            self._embed_cache[key] = M
        return self._embed_cache[key]

    def element(self, level, coords):
        coords = tuple(int(c) % self.p for c in coords)
        D = self.degrees[level]
        coords = coords + (0,) * (D - len(coords))
        if len(coords) != D:
            raise ValueError(f"level {level} elements have {D} coordinates")
        return FieldElement(self, level, coords)

    def from_int(self, level, n):
        return FieldElement(self, level, self.fields[level].from_int(n))

    def embed(self, a, dst):
        return FieldElement(self, dst, self.embed_raw(a.coords, a.level, dst))

    def to_dict(self):
        return {"p": self.p, "degrees": list(self.degrees),
                "moduli": [list(f.modulus) for f in self.fields]}

    @classmethod
    def from_dict(cls, d):
        return cls(d["p"], d["degrees"], d.get("moduli"))


def _eval_in(F, coeffs, x):
    """Evaluate an F_p-coefficient polynomial at ``x`` in F."""
    acc = F.zero
    for c in reversed(coeffs):
        acc = F.add(F.mul(acc, x), F.scalar(c))
    return acc


@lru_cache(maxsize=None)
def tower(p, degrees):
    """Shared, cached tower instance (towers are immutable after construction)."""
    return FieldTower(p, list(degrees))


@dataclass(frozen=True)
class FieldElement:
    tower: FieldTower
    level: int
    coords: tuple

    @property
    def field(self):
        return self.tower.fields[self.level]

    def _check(self, other):
        if not isinstance(other, FieldElement):
            other = FieldElement(self.tower, self.level, self.field.scalar(other))
        if other.tower is not self.tower or other.level != self.level:
            raise LevelMismatch(f"level {self.level} vs level {other.level}")
        return other

    def __add__(self, other):
        other = self._check(other)
        return FieldElement(self.tower, self.level, self.field.add(self.coords, other.coords))

    __radd__ = __add__

    def __sub__(self, other):
        other = self._check(other)
        return FieldElement(self.tower, self.level, self.field.sub(self.coords, other.coords))

    def __rsub__(self, other):
        return self._check(other) - self

    def __neg__(self):
        return FieldElement(self.tower, self.level, self.field.neg(self.coords))

    def __mul__(self, other):
        other = self._check(other)
        return FieldElement(self.tower, self.level, self.field.mul(self.coords, other.coords))

    __rmul__ = __mul__

    def inv(self):
        return FieldElement(self.tower, self.level, self.field.inv(self.coords))

    def __truediv__(self, other):
        return self * self._check(other).inv()

    def __pow__(self, e):
        return FieldElement(self.tower, self.level, self.field.pow(self.coords, e))

    def __eq__(self, other):
        if isinstance(other, int):
            return self.coords == self.field.scalar(other)
        if not isinstance(other, FieldElement):
            return NotImplemented
        return self.tower is other.tower and self.level == other.level and self.coords == other.coords

    def __hash__(self):
        return hash((id(self.tower), self.level, self.coords))

    def is_zero(self):
        return not any(self.coords)

    def __int__(self):
        return self.field.to_int(self.coords)

    def __repr__(self):
        return f"FieldElement(level={self.level}, coords={list(self.coords)})"


# --- the operations ---------------------------------------------------------

def field_ops(op, a, b=None):
    """Bundle entry point: ``op`` in {"add", "sub", "mul", "inv", "div"}."""
    if op == "inv":
        return a.inv()
    return {"add": a.__add__, "sub": a.__sub__, "mul": a.__mul__, "div": a.__truediv__}[op](b)


def frobenius(a, power, base_level=0):
    """a -> a^{|base|^e}; ``power`` is a FrobeniusPower or an int exponent."""
    e = power.exponent if isinstance(power, FrobeniusPower) else int(power)
    f = a.tower.degrees[base_level]
    return FieldElement(a.tower, a.level, a.field.frob(a.coords, f * e))


def roots_of_unity_present(m, tower_, level):
    """``(True, primitive m-th root)`` if ``m | |F| - 1`` at ``level``, else ``(False, None)``.

    The root returned is the first element, in integer order, of exact order m.
    """
    if m % tower_.p == 0:
        raise WildOrder(f"order {m} is divisible by the characteristic {tower_.p}")
    F = tower_.field(level)
    if (F.size - 1) % m:
        return False, None
    for n in range(1, F.size):
        a = F.from_int(n)
        if F.pow(a, m) == F.one and all(F.pow(a, m // r) != F.one for r in factorint(m)):
            return True, FieldElement(tower_, level, a)
    return True, None  # pragma: no cover


def solve_frobenius_shift(F, frob_k, rhs, subspace=None):
    """A solution w of ``w^{p^frob_k} - w = rhs``, restricted to an F_p-subspace.

    Returns ``None`` when no solution exists.  Deterministic: free variables zero.
    """
    Fp = prime_field(F.p)
    basis = subspace if subspace is not None else F.basis()
    cols = [F.sub(F.frob(b, frob_k), b) for b in basis]
    rows = [list(r) for r in zip(*cols)]
    sol = linalg.solve(rows, list(rhs), Fp, ncols=len(basis))
    if sol is None:
        return None
    acc = F.zero
    for c, b in zip(sol, basis):
        if c:
            acc = F.add(acc, F.smul(c, b))
    return acc


def artin_schreier_generator(tower_, big, small):
    """ω in level ``big`` with γ(ω) = ω + 1 for γ the |small|-Frobenius.

    Requires ``[big : small] = p``.  Returns ``(ω, γ)`` where γ is a
    FrobeniusPower over ``small``; ω^p - ω lies in level ``small``.
    """
    n = tower_.relative_degree(big, small)
    if n != tower_.p:
        raise NoSuchExtension(f"[{tower_.degrees[big]}:{tower_.degrees[small]}] = {n} is not p = {tower_.p}")
    F = tower_.field(big)
    omega = solve_frobenius_shift(F, tower_.degrees[small], F.one)
    if omega is None:  # pragma: no cover - trace of 1 is p = 0
        raise NoSuchExtension("no Artin–Schreier generator")
    # c = γ(ω) - ω is 1 by construction; rescaling by c^{-1} is the identity here
    return FieldElement(tower_, big, omega), FrobeniusPower(1, n)


def gcd_all(values, start=0):
    g = start
    for v in values:
        g = gcd(g, v)
    return g
