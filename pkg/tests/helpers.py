"""Random class generators and an independent sympy model of the class ring."""

import random

import sympy

from mquot.mclass import LefschetzPoly, MotivicClass, RealizationSpec, UVPoly, K0

SYMBOLS = ("A", "B", "C", "D")


def random_class(rng: random.Random, tag=K0, symbols=SYMBOLS, terms=4, max_exp=3, negative=False):
    body = {}
    lo = -2 if negative else 0
    for _ in range(rng.randint(0, terms)):
        mono = tuple(sorted(rng.choice(symbols) for _ in range(rng.randint(0, 2))))
        poly = LefschetzPoly({rng.randint(lo, max_exp): rng.randint(-6, 6) for _ in range(rng.randint(1, 3))})
        body[mono] = body[mono] + poly if mono in body else poly
    return MotivicClass(tag, body)


def to_sympy(c: MotivicClass):
    L = sympy.Symbol("L")
    expr = sympy.Integer(0)
    for mono, poly in c.body:
        term = sum(sympy.Integer(k) * L ** e for e, k in poly.terms)
        for s in mono:
            term *= sympy.Symbol(s)
        expr += term
    return sympy.expand(expr)


def random_images(rng, symbols=SYMBOLS, hd=False):
    if hd:
        return {s: UVPoly({(rng.randint(0, 2), rng.randint(0, 2)): rng.randint(-3, 3) for _ in range(2)})
                for s in symbols}
    return {s: rng.randint(-10, 10) for s in symbols}


def random_spec(rng, hd=None):
    hd = rng.random() < 0.3 if hd is None else hd
    if hd:
        return RealizationSpec.hodge_deligne(random_images(rng, hd=True))
    return RealizationSpec.point_count(rng.choice([2, 3, 4, 5, 7, 8, 9]), random_images(rng))
