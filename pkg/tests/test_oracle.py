import itertools

import pytest

from mquot import catalog, oracle
from mquot.errors import BudgetExceeded
from mquot.gfq import FiniteField


def naive_count(a, m):
    """Frobenius^m-stable orbits, for untwisted actions (n = 1), by direct enumeration.

    Written without the oracle's point space: the embedding of k into F_{q^N}
    is found by searching for a root of k's modulus.
    """
    assert a.n == 1
    N = m * a.group.exponent
    F = FiniteField(a.p, a.f * N)
    k = a.K
    if k.D == 1:
        emb = lambda c: F.scalar(c[0])
    else:
        root = next(x for x in F.elements()
                    if F.is_zero(_eval(F, k.modulus, x)))
        emb = lambda c: _eval(F, c, root)
    maps = []
    for _, g in a.elements():
        A = [[emb(c) for c in row] for row in g.matrix]
        t = [emb(c) for c in g.translation]
        maps.append((A, t))

    def act(v, A, t):
        return tuple(F.add(sum_(F, [F.mul(A[i][j], v[j]) for j in range(len(v))]), t[i]) for i in range(len(v)))

    def frob(v):
        return tuple(F.pow(x, a.q ** m) for x in v)

    seen, count = set(), 0
    for v in itertools.product(list(F.elements()), repeat=a.d):
        if v in seen:
            continue
        orb = {act(v, A, t) for A, t in maps}
        seen |= orb
        count += frob(v) in orb
    return count


def _eval(F, coeffs, x):
    acc = F.zero
    for c in reversed(coeffs):
        acc = F.add(F.mul(acc, x), F.scalar(c))
    return acc


def sum_(F, xs):
    acc = F.zero
    for x in xs:
        acc = F.add(acc, x)
    return acc


SMALL = [("f2-trivial", 1), ("f2-trivial", 2), ("f2-translate", 1), ("f2-translate", 2), ("f3-translate", 1),
         ("f3-translate", 2), ("f3-negate", 2), ("f5-z4", 1), ("f4-z3", 1), ("f4-klein", 1), ("f4-translate", 2),
         ("f2-exinsep", 1), ("f2-exinsep", 2), ("f3-exinsep", 1), ("f3-negate-plane", 1), ("f5-klein-plane", 1),
         ("f5-swap", 1)]


@pytest.mark.parametrize("name,m", SMALL)
def test_oracle_matches_naive_enumeration(name, m):
    a = catalog.action(name)
    assert oracle.orbit_count_oracle(a, m) == naive_count(a, m) == a.q ** (m * a.d)


@pytest.mark.parametrize("name", ["f4/f2-frobenius", "f4/f2-frobenius-shift", "f4/f2-z4", "f4/f2-klein",
                                  "f9/f3-z6", "f25/f5-frobenius", "f2-exinsep", "f4/f2-frobenius-plane"])
def test_fixed_point_method_matches_literal_enumeration(name):
    a = catalog.action(name)
    for m in (1, 2):
        if a.q ** (oracle.enumeration_degree(a, m) * a.d) > 70_000:
            continue
        r1 = oracle.oracle_report(a, m)
        r2 = oracle.oracle_report(a, m, method="enumerate")
        assert r1.count == r2.count
        assert r1.burnside == r1.count


def test_trivial_group_line():
    a = catalog.action("f2-trivial")
    assert oracle.orbit_count_oracle(a, 1) == 2


def test_pure_frobenius_twist_on_line():
    # invariants form k[x], so the quotient is A^1 over k
    a = catalog.action("f4/f2-frobenius")
    assert oracle.orbit_count_oracle(a, 1) == a.q == 2


def test_exinsep_p2():
    assert oracle.orbit_count_oracle(catalog.exinsep(2), 1) == 4


def test_budget():
    a = catalog.action("f5-translate")
    with pytest.raises(BudgetExceeded) as e:
        oracle.orbit_count_oracle(a, 2, oracle.Budget(max_degree=5))
    assert e.value.required == 10
    with pytest.raises(BudgetExceeded):
        oracle.orbit_count_oracle(a, 1, oracle.Budget(max_points=3))


def test_stabilizer_of_origin_is_full_group():
    a = catalog.action("f5-klein-plane")
    F = FiniteField(5, oracle.enumeration_degree(a, 1))
    st = oracle.stabilizer(a, (0, (F.zero, F.zero)))
    with pytest.raises(ValueError):
        oracle.stabilizer(a, (0, (a.K.zero, a.K.zero)))
    assert len(st.words) == a.group.order and st.orbit_size == 1 and st.consistent


def test_free_action_has_trivial_stabilizers():
    a = catalog.action("f3-translate")
    N = oracle.enumeration_degree(a, 1)
    F = FiniteField(3, N)
    for x in F.elements():
        st = oracle.stabilizer(a, (0, (x,)), N)
        assert st.words == ((0,),) and st.orbit_size == 3


def test_exinsep_stabilizer_off_fixed_locus():
    p = 3
    a = catalog.exinsep(p)
    N = oracle.enumeration_degree(a, 1)
    F = FiniteField(p, N)
    for y in F.elements():
        for x in (F.zero, F.one):
            st = oracle.stabilizer(a, (0, (y, x)), N)
            # x + k y = x forces k = 0 unless y = 0
            assert len(st.words) == (1 if not F.is_zero(y) else p)
            assert st.consistent


def test_catalog_counts():
    for a in catalog.actions():
        for m in (1, 2):
            r = oracle.oracle_report(a, m)
            assert r.count == a.q ** (m * a.d) == r.burnside, (a.name, m)
