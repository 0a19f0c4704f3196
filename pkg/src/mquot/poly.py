"""Sparse multivariate polynomials over a ``FiniteField`` (raw element tuples)."""

from __future__ import annotations

from . import linalg


class Poly:
    """Σ c_e x^e with exponent tuples ``e`` of length ``nvars``; zero terms are dropped."""

    __slots__ = ("F", "nvars", "terms")

    def __init__(self, F, nvars, terms=None):
        self.F = F
        self.nvars = nvars
        self.terms = {e: c for e, c in (terms or {}).items() if not F.is_zero(c)}

    # constructors
    @classmethod
    def const(cls, F, nvars, c):
        return cls(F, nvars, {(0,) * nvars: c})

    @classmethod
    def var(cls, F, nvars, i, power=1):
        e = [0] * nvars
        e[i] = power
        return cls(F, nvars, {tuple(e): F.one})

    @classmethod
    def linear(cls, F, coeffs, const=None):
        """Σ coeffs[i] x_i + const."""
        n = len(coeffs)
        t = {}
        for i, c in enumerate(coeffs):
            e = [0] * n
            e[i] = 1
            t[tuple(e)] = c
        if const is not None:
            t[(0,) * n] = const
        return cls(F, n, t)

    @classmethod
    def univariate(cls, F, coeffs):
        """From a coefficient list, lowest degree first."""
        return cls(F, 1, {(i,): c for i, c in enumerate(coeffs)})

    # arithmetic
    def __add__(self, other):
        F = self.F
        t = dict(self.terms)
        for e, c in other.terms.items():
            t[e] = F.add(t[e], c) if e in t else c
        return Poly(F, self.nvars, t)

    def __neg__(self):
        return Poly(self.F, self.nvars, {e: self.F.neg(c) for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        F = self.F
        if not isinstance(other, Poly):
            return Poly(F, self.nvars, {e: F.mul(c, other) for e, c in self.terms.items()})
        t = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                c = F.mul(c1, c2)
                t[e] = F.add(t[e], c) if e in t else c
        return Poly(F, self.nvars, t)

    def __pow__(self, k):
        r = Poly.const(self.F, self.nvars, self.F.one)
        base = self
        while k:
            if k & 1:
                r = r * base
            base = base * base
            k >>= 1
        return r

    def __eq__(self, other):
        return isinstance(other, Poly) and self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self):
        return hash(tuple(sorted(self.terms.items())))

    def is_zero(self):
        return not self.terms

    def degree(self):
        return max((sum(e) for e in self.terms), default=-1)

    def coeff(self, e):
        return self.terms.get(tuple(e), self.F.zero)

    def map_coeffs(self, fn):
        return Poly(self.F, self.nvars, {e: fn(c) for e, c in self.terms.items()})

    def substitute(self, images, coeff_map=None):
        """Ring map x_i -> images[i] (Poly objects), coefficients through ``coeff_map``."""
        F = self.F
        nv = images[0].nvars if images else self.nvars
        out = Poly(F, nv)
        powers = [dict() for _ in images]
        for e, c in sorted(self.terms.items()):
            term = Poly.const(F, nv, coeff_map(c) if coeff_map else c)
            for i, k in enumerate(e):
                if k:
                    if k not in powers[i]:
                        powers[i][k] = images[i] ** k
                    term = term * powers[i][k]
            out = out + term
        return out

    def compose(self, inner):
        """Univariate composition self(inner)."""
        return self.substitute([inner])

    def evaluate(self, point, G=None, coeff_map=None):
        """Value at ``point`` (raw elements of G, default the coefficient field)."""
        G = G or self.F
        acc = G.zero
        for e, c in self.terms.items():
            v = coeff_map(c) if coeff_map else c
            for x, k in zip(point, e):
                if k:
                    v = G.mul(v, G.pow(x, k))
            acc = G.add(acc, v)
        return acc

    def univariate_coeffs(self):
        deg = self.degree()
        return [self.coeff((i,)) for i in range(deg + 1)]

    def to_document(self):
        return [[list(e), list(c)] for e, c in sorted(self.terms.items())]

    @classmethod
    def from_document(cls, F, nvars, doc):
        return cls(F, nvars, {tuple(e): tuple(c) for e, c in doc})

    def __repr__(self):
        if not self.terms:
            return "0"
        names = ["x"] if self.nvars == 1 else [f"x{i + 1}" for i in range(self.nvars)]
        parts = []
        for e, c in sorted(self.terms.items(), key=lambda t: (-sum(t[0]), t[0])):
            mono = "*".join(n if k == 1 else f"{n}^{k}" for n, k in zip(names, e) if k)
            cs = _fmt(self.F, c)
            if not mono:
                parts.append(cs)
            elif c == self.F.one:
                parts.append(mono)
            else:
                parts.append(f"{cs}*{mono}")
        return " + ".join(parts)


def _fmt(F, c):
    if F.D == 1:
        return str(c[0])
    return "[" + ",".join(map(str, c)) + "]"


def affine_images(F, matrix, translation):
    """The polynomials Σ_j A_ij x_j + a_i."""
    return [Poly.linear(F, list(row), a) for row, a in zip(matrix, translation)]


def independent(F, forms):
    """Whether linear forms (coefficient rows over F) are F-linearly independent."""
    return linalg.rank([list(f) for f in forms], F) == len(forms)
