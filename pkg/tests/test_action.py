import itertools

import pytest

from mquot import catalog
from mquot.action import (AbelianGroupSpec, GeneratorDatum, SemiLinearAffineAction, is_normalized, normal_form,
                          normalize, recenter, tame_fixed_point, validate, NO_TRANSLATION_NEEDED)
from mquot.errors import MalformedAction, ParseError
from mquot.poly import Poly


def f5_action(group, gens, d, n=1, name="t"):
    """Build over F_5 (or F_{5^n}) from integer matrices."""
    shell = SemiLinearAffineAction(5, 1, n, d, AbelianGroupSpec(), [])
    K = shell.K
    data = [GeneratorDatum(tw, [[K.from_int(c) for c in r] for r in A], [K.from_int(c) for c in t])
            for tw, A, t in gens]
    return SemiLinearAffineAction(5, 1, n, d, group, data, name)


def test_compose_with_identity():
    a = catalog.action("f9/f3-z6")
    for g in a.generators:
        assert a.compose(a.identity(), g) == g
        assert a.compose(g, a.identity()) == g


def test_order_two_squares_to_identity():
    a = catalog.action("f5-swap")
    g = a.generators[0]
    assert a.is_identity(a.compose(g, g))


@pytest.mark.parametrize("p", [2, 3, 5, 7])
def test_exinsep_generator_has_order_p(p):
    a = catalog.exinsep(p)
    g = a.generators[0]
    # integer model of the matrix: (y, x) -> (y, x + y); its k-th power adds k*y
    M = [[1, 0], [1, 1]]
    P = [[1, 0], [0, 1]]
    for k in range(1, p + 1):
        P = [[sum(P[i][l] * M[l][j] for l in range(2)) % p for j in range(2)] for i in range(2)]
        assert P == [[1, 0], [k % p, 1]]
        assert a.is_identity(a.power(g, k)) == (k == p)


def test_semilinear_composition_twists_coefficients():
    a = catalog.action("f4/f2-frobenius-shift")
    g = a.generators[0]
    K = a.K
    x = a.coordinate(0)
    c = K.from_int(2)
    poly = x * c
    # g*(c x) = σ(c) g*(x); applying g twice is the identity
    once = a.act_on_poly(g, poly)
    assert once == a.act_on_poly(g, x) * a.sigma(c)
    assert a.act_on_poly(g, once) == poly
    assert a.act_on_poly(a.compose(g, g), poly) == poly


def test_trivial_action_is_valid():
    assert validate(catalog.action("f2-trivial")).ok


def test_non_commuting_pair_rejected():
    # over F_5: x -> -x and the swap do not commute on A^2
    a = f5_action(AbelianGroupSpec((), (2, 2)),
                  [(0, [[4, 0], [0, 1]], [0, 0]), (0, [[0, 1], [1, 0]], [0, 0])], 2)
    ga, gb = a.generators
    assert a.compose(ga, gb) != a.compose(gb, ga)
    rep = validate(a)
    assert not rep.ok and rep.failed == ["commutativity"]


def test_tame_order_three_over_f5_rejected():
    # 2 is not a cube root of unity mod 5, but the failing check is about the field
    a = f5_action(AbelianGroupSpec((), (3,)), [(0, [[1]], [1])], 1)
    rep = validate(a)
    assert "roots-of-unity" in rep.failed
    assert (5 - 1) % 3 != 0


def test_twists_must_generate_galois_group():
    a = f5_action(AbelianGroupSpec((), (2,)), [(0, [[4]], [0])], 1, n=2)
    rep = validate(a)
    assert rep.failed == ["twist-surjectivity"]


def test_catalog_actions_validate():
    for a in catalog.actions():
        assert validate(a).ok, (a.name, validate(a).messages())


def test_malformed():
    with pytest.raises(MalformedAction):
        f5_action(AbelianGroupSpec((), (2,)), [], 1)
    with pytest.raises(MalformedAction):
        f5_action(AbelianGroupSpec((), (2,)), [(0, [[1, 0]], [0])], 1)
    with pytest.raises(ParseError):
        SemiLinearAffineAction.from_document({"tower": {}})


def test_document_roundtrip():
    for a in catalog.actions():
        b = SemiLinearAffineAction.from_document(a.to_document())
        assert b.generators == a.generators and b.to_document() == a.to_document()


def test_normalize_already_normal():
    a = catalog.exinsep(3)
    assert is_normalized(a)
    b, change = normalize(a)
    assert change.is_identity(a.K)
    assert b.generators == a.generators


def test_normalize_swap_diagonalizes():
    a = catalog.action("f5-swap")
    b, change = normalize(a)
    K = a.K
    A = [[K.to_int(c) for c in row] for row in b.generators[0].matrix]
    assert A == [[1, 0], [0, 4]]
    P = [[K.to_int(c) for c in row] for row in change.matrix]
    # by hand: z1 = x1 + x2 is fixed, z2 = x1 - x2 changes sign under the swap
    for row in P:
        u, v = row
        assert (v, u) in {(u, v), ((-u) % 5, (-v) % 5)}
    assert sorted(P) == sorted([[1, 1], [1, 4]])
    assert is_normalized(b)


def test_tame_fixed_point_none_needed():
    assert tame_fixed_point(catalog.action("f5-z4")) is NO_TRANSLATION_NEEDED


@pytest.mark.parametrize("c", range(1, 5))
def test_tame_fixed_point_negation(c):
    a = f5_action(AbelianGroupSpec((), (2,)), [(0, [[4]], [c])], 1)
    v = tame_fixed_point(a)
    # brute force: the fixed point of v -> -v + c in F_5
    fixed = [x for x in range(5) if (-x + c) % 5 == x]
    assert [a.K.to_int(v[0])] == fixed == [(3 * c) % 5]
    b = recenter(a, v)
    assert all(a.K.is_zero(t) for t in b.generators[0].translation)


def test_wild_translations_untouched_by_recentering():
    a = catalog.action("f9/f3-z6")
    b, _ = normal_form(a)
    assert b.generators[0].translation == a.generators[0].translation


def test_normal_form_of_catalog_is_normalized():
    for a in catalog.actions():
        b, change = normal_form(a)
        assert is_normalized(b), a.name
        # the change of coordinates conjugates one action into the other
        forms = change.forms(a.K)
        for ga, gb in zip(a.generators, b.generators):
            for i, z in enumerate(forms):
                lhs = a.act_on_poly(ga, z)
                img = gb.matrix[i]
                rhs = Poly.const(a.K, a.d, gb.translation[i])
                for j in range(a.d):
                    rhs = rhs + forms[j] * img[j]
                assert lhs == rhs, a.name


def test_group_words():
    g = AbelianGroupSpec((2,), (3,))
    assert g.order == 6 and g.exponent == 6
    assert sorted(g.words()) == sorted(itertools.product(range(2), range(3)))
