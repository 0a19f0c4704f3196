"""Dense Gaussian elimination over any object exposing field operations.

A field here is anything with ``zero``, ``one``, ``add``, ``sub``, ``mul``,
``inv``, ``neg`` and ``is_zero``.  Results are deterministic: pivots are taken
left to right, free variables are set to zero in particular solutions, and
null-space vectors have a single free variable equal to one.
"""

from __future__ import annotations


def rref(rows, F, ncols=None):
    """Reduced row echelon form. Returns ``(R, pivots)``; the input is not modified."""
    R = [list(r) for r in rows]
    if ncols is None:
        ncols = len(R[0]) if R else 0
    pivots = []
    r = 0
    for c in range(ncols):
        if r == len(R):
            break
        piv = None
        for i in range(r, len(R)):
            if not F.is_zero(R[i][c]):
                piv = i
                break
        if piv is None:
            continue
        R[r], R[piv] = R[piv], R[r]
        s = F.inv(R[r][c])
        R[r] = [F.mul(s, x) for x in R[r]]
        for i in range(len(R)):
            if i != r and not F.is_zero(R[i][c]):
                f = R[i][c]
                R[i] = [F.sub(x, F.mul(f, y)) for x, y in zip(R[i], R[r])]
        pivots.append(c)
        r += 1
    return R[:r], pivots


def rank(rows, F, ncols=None):
    return len(rref(rows, F, ncols)[1])


def nullspace(rows, ncols, F):
    """Basis of ``{v : rows * v = 0}``."""
    R, pivots = rref(rows, F, ncols) if rows else ([], [])
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [F.zero] * ncols
        v[fc] = F.one
        for row, pc in zip(R, pivots):
            v[pc] = F.neg(row[fc])
        basis.append(v)
    return basis


def solve(rows, rhs, F, ncols=None):
    """One solution of ``rows * v = rhs`` (free variables zero), or ``None``."""
    if ncols is None:
        ncols = len(rows[0]) if rows else 0
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    R, pivots = rref(aug, F, ncols + 1)
    if ncols in pivots:
        return None
    v = [F.zero] * ncols
    for row, pc in zip(R, pivots):
        v[pc] = row[ncols]
    return v


def matvec(M, v, F):
    out = []
    for row in M:
        acc = F.zero
        for a, b in zip(row, v):
            if not F.is_zero(a) and not F.is_zero(b):
                acc = F.add(acc, F.mul(a, b))
        out.append(acc)
    return out


def matmul(A, B, F):
    cols = list(zip(*B)) if B else []
    return [[_dot(row, col, F) for col in cols] for row in A]


def _dot(u, v, F):
    acc = F.zero
    for a, b in zip(u, v):
        if not F.is_zero(a) and not F.is_zero(b):
            acc = F.add(acc, F.mul(a, b))
    return acc


def identity(n, F):
    return [[F.one if i == j else F.zero for j in range(n)] for i in range(n)]


def inverse(M, F):
    n = len(M)
    aug = [list(row) + e for row, e in zip(M, identity(n, F))]
    R, pivots = rref(aug, F, 2 * n)
    if pivots[:n] != list(range(n)) or len(pivots) < n:
        raise ZeroDivisionError("singular matrix")
    return [row[n:] for row in R[:n]]


def transpose(M):
    return [list(c) for c in zip(*M)]


def in_span(basis, v, F):
    if not basis:
        return all(F.is_zero(x) for x in v)
    return rank(list(basis) + [v], F) == rank(basis, F)
