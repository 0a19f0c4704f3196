"""j-invariants of y^2 = x^3 + a x + b over F_{p^2} and of their Frobenius twists.

The twist E^(p) has coefficients (a^p, b^p).  With j = 1728 · 4a^3 / (4a^3 + 27b^2),
j(E) = j(E^(p)) exactly when b^2/a^3 lies in F_p (for a != 0).
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .gfq import FiniteField


def j_invariant(F: FiniteField, a, b):
    a3 = F.pow(a, 3)
    num = F.mul(F.scalar(1728 * 4), a3)
    den = F.add(F.mul(F.scalar(4), a3), F.mul(F.scalar(27), F.mul(b, b)))
    if F.is_zero(den):
        raise ZeroDivisionError("singular curve")
    return F.div(num, den)


@dataclass(frozen=True)
class TwistSample:
    a: tuple
    b: tuple
    ratio_in_prime_field: bool
    j_equal: bool

    @property
    def consistent(self):
        return self.ratio_in_prime_field == self.j_equal


def twist_sample(F: FiniteField, a, b) -> TwistSample:
    ratio = F.div(F.mul(b, b), F.pow(a, 3))
    in_fp = F.frob(ratio, 1) == ratio
    j1 = j_invariant(F, a, b)
    j2 = j_invariant(F, F.frob(a, 1), F.frob(b, 1))
    return TwistSample(a, b, in_fp, j1 == j2)


def _nonsingular(F, a, b):
    den = F.add(F.mul(F.scalar(4), F.pow(a, 3)), F.mul(F.scalar(27), F.mul(b, b)))
    return not F.is_zero(a) and not F.is_zero(den)


def all_curves(p):
    """Every nonsingular (a, b) with a != 0 over F_{p^2}."""
    F = FiniteField(p, 2)
    return F, [twist_sample(F, a, b) for a in F.elements() for b in F.elements() if _nonsingular(F, a, b)]


def sampled_curves(p, count=10, seed=0, ratio_in_prime_field=False):
    """``count`` random curves whose ratio b^2/a^3 is (or is not) in F_p."""
    F = FiniteField(p, 2)
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        a, b = F.from_int(rng.randrange(F.size)), F.from_int(rng.randrange(F.size))
        if not _nonsingular(F, a, b):
            continue
        s = twist_sample(F, a, b)
        if s.ratio_in_prime_field == ratio_in_prime_field:
            out.append(s)
    return out
