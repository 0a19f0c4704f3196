"""Bundled actions and SNC models used by the verification runs.

Field entries in the action table are written as small integers (the base-p
encoding c_0 + c_1 p + ... of an element of K), as ``("k", i)`` for the
element i of k embedded into K, or as ``("root", r)`` for the first primitive
r-th root of unity of k.
"""

from __future__ import annotations

import itertools
from math import gcd

from .action import AbelianGroupSpec, GeneratorDatum, SemiLinearAffineAction
from .mclass import K0, K0_mu, MotivicClass
from .nearby import SncModel, Stratum, mutate

# name: (p, deg k, n, d, wild orders, tame orders, [(twist, matrix, translation), ...])
ACTION_TABLE = {
    "f2-trivial": (2, 1, 1, 1, (), (), []),
    "f2-translate": (2, 1, 1, 1, (2,), (), [(0, [[1]], [1])]),
    "f4/f2-frobenius": (2, 1, 2, 1, (2,), (), [(1, [[1]], [0])]),
    "f4/f2-frobenius-shift": (2, 1, 2, 1, (2,), (), [(1, [[1]], [1])]),
    "f4/f2-z4": (2, 1, 2, 1, (4,), (), [(1, [[1]], [2])]),
    "f4/f2-klein": (2, 1, 2, 1, (2, 2), (), [(1, [[1]], [0]), (0, [[1]], [1])]),
    "f4/f2-frobenius-plane": (2, 1, 2, 2, (2,), (), [(1, [[1, 0], [1, 1]], [0, 0])]),
    "f2-exinsep": (2, 1, 1, 2, (2,), (), [(0, [[1, 0], [1, 1]], [0, 0])]),
    "f3-translate": (3, 1, 1, 1, (3,), (), [(0, [[1]], [1])]),
    "f3-negate": (3, 1, 1, 1, (), (2,), [(0, [[2]], [0])]),
    "f9/f3-z6": (3, 1, 2, 1, (3,), (2,), [(0, [[1]], [1]), (1, [[1]], [0])]),
    "f3-exinsep": (3, 1, 1, 2, (3,), (), [(0, [[1, 0], [1, 1]], [0, 0])]),
    "f3-negate-plane": (3, 1, 1, 2, (), (2,), [(0, [[2, 0], [0, 1]], [1, 0])]),
    "f4-translate": (2, 2, 1, 1, (2,), (), [(0, [[1]], [2])]),
    "f4-klein": (2, 2, 1, 1, (2, 2), (), [(0, [[1]], [1]), (0, [[1]], [2])]),
    "f4-z3": (2, 2, 1, 1, (), (3,), [(0, [[("root", 3)]], [0])]),
    "f16/f4-z6": (2, 2, 2, 1, (2,), (3,), [(1, [[1]], [0]), (0, [[("root", 3)]], [0])]),
    "f4-z6-plane": (2, 2, 1, 2, (2,), (3,), [(0, [[1, 0], [1, 1]], [0, 0]),
                                              (0, [[("root", 3), 0], [0, ("root", 3)]], [0, 0])]),
    "f16/f4-z4": (2, 2, 2, 1, (4,), (), [(1, [[1]], ["outside-k"])]),
    "f5-translate": (5, 1, 1, 1, (5,), (), [(0, [[1]], [1])]),
    "f5-negate-shift": (5, 1, 1, 1, (), (2,), [(0, [[4]], [1])]),
    "f5-z4": (5, 1, 1, 1, (), (4,), [(0, [[2]], [0])]),
    "f5-klein-plane": (5, 1, 1, 2, (), (2, 2), [(0, [[4, 0], [0, 1]], [0, 0]), (0, [[1, 0], [0, 4]], [0, 0])]),
    "f5-swap": (5, 1, 1, 2, (), (2,), [(0, [[0, 1], [1, 0]], [0, 0])]),
    "f25/f5-frobenius": (5, 1, 2, 1, (), (2,), [(1, [[1]], [0])]),
    "f25/f5-z4": (5, 1, 2, 1, (), (4,), [(1, [[2]], [0])]),
    "f5-exinsep": (5, 1, 1, 2, (5,), (), [(0, [[1, 0], [1, 1]], [0, 0])]),
}


def _element(a, spec):
    K = a.K
    if isinstance(spec, int):
        return K.from_int(spec)
    if spec == "outside-k":
        return next(c for c in K.elements() if not a.in_subfield(c, 1))
    kind, val = spec
    if kind == "k":
        return a.k_element(a.k.from_int(val))
    if kind == "root":
        k = a.k
        root = next(x for x in k.elements() if not k.is_zero(x) and k.order(x) == val)
        return a.k_element(root)
    raise ValueError(f"bad element spec {spec!r}")


def build_action(name, p, f, n, d, wild, tame, gens) -> SemiLinearAffineAction:
    group = AbelianGroupSpec(wild, tame)
    shell = SemiLinearAffineAction(p, f, n, d, AbelianGroupSpec(), [], name)
    data = []
    for (twist, matrix, translation), order in zip(gens, group.orders):
        A = [[_element(shell, c) for c in row] for row in matrix]
        t = [_element(shell, c) for c in translation]
        data.append(GeneratorDatum(twist, A, t, order))
    return SemiLinearAffineAction(p, f, n, d, group, data, name)


def actions():
    return [build_action(name, *spec) for name, spec in ACTION_TABLE.items()]


def action(name):
    return build_action(name, *ACTION_TABLE[name])


def exinsep(p):
    """Z/p on A^2 over F_p by x -> x + y, y -> y (coordinates ordered (y, x))."""
    return build_action(f"exinsep-{p}", p, 1, 1, 2, (p,), (), [(0, [[1, 0], [1, 1]], [0, 0])])


# --- SNC model gallery ---------------------------------------------------------------

def _L(e=1, tag=K0):
    return MotivicClass.lefschetz(e, tag)


def _c(v, tag=K0):
    return MotivicClass.const(v, tag)


def _sym(s, tag=K0):
    return MotivicClass.symbol(s, tag)


def _model(name, components, strata, symbols=None, quotients=None, total=None, generic=None, notes=""):
    names = [c for c, _ in components]
    N = dict(components)
    table = {}
    for subset, (cls, cover) in strata.items():
        I = frozenset(subset)
        m = 0
        for i in I:
            m = gcd(m, N[i])
        table[I] = Stratum(I, cls, cover.retag(K0_mu(m)), m)
    for k in range(1, len(names) + 1):
        for s in itertools.combinations(names, k):
            if frozenset(s) not in table:
                raise ValueError(f"gallery model {name} misses stratum {s}")
    return SncModel(name, list(components), table, dict(symbols or {}), dict(quotients or {}),
                    total, generic, notes)


def models():
    L = _L()
    out = []
    out.append(_model(
        "x*y^2", [("E1", 1), ("E2", 2)],
        {("E1",): (L - 1, L - 1), ("E2",): (L - 1, _sym("G~")), ("E1", "E2"): (_c(1), _c(1))},
        symbols={"G~": 2}, quotients={"G~": L - 1}, total=2 * L - 1,
        notes="f = x y^2 on A^2: two lines through the origin, the y=0 line doubled"))
    out.append(_model(
        "x^2*y^3", [("E1", 2), ("E2", 3)],
        {("E1",): (_sym("A"), _sym("A~")), ("E2",): (_sym("B"), _sym("B~")),
         ("E1", "E2"): (_sym("P"), _sym("P"))},
        symbols={"A~": 2, "B~": 3, "A": None, "B": None, "P": None},
        quotients={"A~": _sym("A"), "B~": _sym("B")},
        notes="general two-component model with symbolic strata, coprime multiplicities"))
    out.append(_model(
        "x^2*y^4", [("E1", 2), ("E2", 4)],
        {("E1",): (_sym("A"), _sym("A~")), ("E2",): (_sym("B"), _sym("B~")),
         ("E1", "E2"): (_sym("P"), _sym("P~"))},
        symbols={"A~": 2, "B~": 4, "P~": 2, "A": None, "B": None, "P": None},
        quotients={"A~": _sym("A"), "B~": _sym("B"), "P~": _sym("P")},
        notes="two components with m_12 = 2"))
    out.append(_model(
        "smooth", [("F", 1)], {("F",): (_sym("F"), _sym("F"))}, symbols={"F": None},
        notes="a single reduced smooth component"))
    out.append(_model(
        "P1-family", [("E", 1)], {("E",): (1 + L, 1 + L)}, total=1 + L, generic=1 + L,
        notes="smooth family of projective lines; special and generic fibre P^1"))
    out.append(_model(
        "cusp", [("C", 1), ("E1", 2), ("E2", 3), ("E3", 6)],
        {("C",): (L - 1, L - 1), ("E1",): (L, _sym("E1~")), ("E2",): (L, _sym("E2~")),
         ("E3",): (L - 2, _sym("E3~")),
         ("C", "E3"): (_c(1), _c(1)), ("E1", "E3"): (_c(1), _sym("Q2~")), ("E2", "E3"): (_c(1), _sym("Q3~")),
         **{s: (_c(0), _c(0)) for s in [("C", "E1"), ("C", "E2"), ("E1", "E2"),
                                         ("C", "E1", "E2"), ("C", "E1", "E3"), ("C", "E2", "E3"),
                                         ("E1", "E2", "E3"), ("C", "E1", "E2", "E3")]}},
        symbols={"E1~": 2, "E2~": 3, "E3~": 6, "Q2~": 2, "Q3~": 3},
        quotients={"E1~": L, "E2~": L, "E3~": L - 2, "Q2~": _c(1), "Q3~": _c(1)},
        total=4 * L,
        notes="minimal embedded resolution of y^2 = x^3: strict transform C and exceptional E1, E2, E3"))
    out.append(_model(
        "x*y", [("E1", 1), ("E2", 1)],
        {("E1",): (L - 1, L - 1), ("E2",): (L - 1, L - 1), ("E1", "E2"): (_c(1), _c(1))},
        total=2 * L - 1, notes="reduced normal crossing of two lines"))
    return out


def mutated_models():
    g = {m.name: m for m in models()}
    L = _L()
    return [
        mutate(g["x*y^2"], "x*y^2/wrong-E12", class_E={("E1", "E2"): _c(2)}),
        mutate(g["x*y^2"], "x*y^2/wrong-cover-quotient", cover_quotients={"G~": L}),
        mutate(g["cusp"], "cusp/wrong-E3", class_E={("E3",): L - 1}),
        mutate(g["x^2*y^3"], "x^2*y^3/wrong-E12", class_E={("E1", "E2"): 2 * _sym("P")}),
        mutate(g["smooth"], "smooth/wrong-cover", class_E_cover={("F",): (_sym("F") + 1).retag(K0_mu(1))}),
        mutate(g["x*y"], "x*y/wrong-cover-E1", class_E_cover={("E1",): L.retag(K0_mu(1))}),
    ]
