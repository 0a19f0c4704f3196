import itertools
import random
from math import comb

import pytest
import sympy

from helpers import random_class, to_sympy
from mquot import catalog
from mquot.errors import ModelInvalid, TotalClassMismatch
from mquot.mclass import K0, M, MotivicClass, RealizationSpec, RingTag, UVPoly, K0_mu, M_mu, mod_L
from mquot.nearby import (BlowupStep, SncModel, Stratum, blowup_step_identity, congruence_check,
                          direct_quotient_sum, motivic_reduction, mutate, nearby_fiber, nearby_fiber_quotient,
                          realize_model, validate_model)

L = MotivicClass.lefschetz()
RES = RingTag("K0", residue=True)


def gallery(name):
    return next(m for m in catalog.models() if m.name == name)


def single(cls, cover=None, N=1):
    I = frozenset({"E"})
    return SncModel("single", [("E", N)], {I: Stratum(I, cls, (cover or cls).retag(K0_mu(N)), N)})


def test_single_component_symbol():
    mdl = gallery("smooth")
    assert nearby_fiber(mdl) == MotivicClass.symbol("F", M_mu(1))
    assert nearby_fiber_quotient(mdl) == MotivicClass.symbol("F", M)
    ok, _ = congruence_check(mdl)
    assert ok


def test_xy2_hand_values():
    mdl = gallery("x*y^2")
    Lm = L.coerce(M)
    G = MotivicClass.symbol("G~", M_mu(2))
    # (L - 1) + [G~] + (1 - L) * 1
    assert nearby_fiber(mdl) == (L - 1).coerce(M).retag(M_mu(2)) + G + (1 - L).coerce(M).retag(M_mu(2))
    assert nearby_fiber_quotient(mdl) == Lm - 1 == direct_quotient_sum(mdl)
    assert motivic_reduction(mdl) == MotivicClass.const(-1).retag(RES)
    ok, diff = congruence_check(mdl)
    assert ok and diff.is_zero()


def test_reduction_of_affine_space_and_point():
    assert motivic_reduction(single(MotivicClass.lefschetz(3))).is_zero()
    assert motivic_reduction(single(MotivicClass.one())) == MotivicClass.one().retag(RES)


def test_all_strata_points():
    names = ["A", "B", "C"]
    strata = {}
    for k in range(1, 4):
        for I in itertools.combinations(names, k):
            strata[frozenset(I)] = Stratum(frozenset(I), MotivicClass.one(), MotivicClass.one(K0_mu(1)), 1)
    mdl = SncModel("points", [(n, 1) for n in names], strata)
    Ls = sympy.Symbol("L")
    expected = sympy.expand(sum(comb(3, k) * (1 - Ls) ** (k - 1) for k in range(1, 4)))
    assert to_sympy(nearby_fiber_quotient(mdl)) == expected


def test_gallery_congruence_and_mutations():
    models = catalog.models()
    assert len(models) >= 5
    for mdl in models:
        ok, diff = congruence_check(mdl)
        assert ok, (mdl.name, diff)
        assert nearby_fiber_quotient(mdl) == direct_quotient_sum(mdl)
    muts = catalog.mutated_models()
    assert len(muts) >= 5
    for mdl in muts:
        ok, diff = congruence_check(mdl)
        assert not ok and not diff.is_zero(), mdl.name


def test_corrupted_e12_witness():
    mdl = mutate(gallery("x*y^2"), "bad", class_E={("E1", "E2"): MotivicClass.const(2)})
    ok, diff = congruence_check(mdl)
    # S_f/mu keeps the cover of E12 (a point): residue -1; the special fiber is 2L: residue 0
    assert not ok and diff == MotivicClass.const(-1).retag(RES)


def test_declared_total_is_checked():
    mdl = gallery("cusp")
    assert motivic_reduction(mdl).is_zero()
    bad = SncModel(mdl.name, mdl.components, mdl.strata, mdl.symbols, mdl.cover_quotients, 4 * L + 1)
    with pytest.raises(TotalClassMismatch):
        motivic_reduction(bad)


def test_model_validation():
    mdl = gallery("x*y^2")
    strata = dict(mdl.strata)
    del strata[frozenset({"E1", "E2"})]
    with pytest.raises(ModelInvalid, match="missing strata"):
        validate_model(SncModel("m", mdl.components, strata, mdl.symbols, mdl.cover_quotients))
    strata = dict(mdl.strata)
    I = frozenset({"E2"})
    strata[I] = Stratum(I, strata[I].class_E, strata[I].class_E_cover, 1)
    with pytest.raises(ModelInvalid, match="gcd"):
        validate_model(SncModel("m", mdl.components, strata, mdl.symbols, mdl.cover_quotients))
    with pytest.raises(ModelInvalid, match="no declared quotient"):
        validate_model(SncModel("m", mdl.components, mdl.strata, mdl.symbols, {}))


def test_model_document_roundtrip():
    for mdl in catalog.models() + catalog.mutated_models():
        doc = mdl.to_document()
        back = SncModel.from_document(doc)
        assert back.to_document() == doc
        assert congruence_check(back)[0] == congruence_check(mdl)[0]


def test_blowup_identity_cases():
    C, V = MotivicClass.symbol("C"), MotivicClass.symbol("V") + L
    assert blowup_step_identity(BlowupStep(1, C, V))
    assert blowup_step_identity(BlowupStep(0, C, V, projective_dim=0))
    rng = random.Random(11)
    for _ in range(50):
        assert blowup_step_identity(BlowupStep(3, random_class(rng), random_class(rng)))
        assert blowup_step_identity(BlowupStep(3, random_class(rng), random_class(rng), projective_dim=2))


def test_realize_model_reports():
    mdl = gallery("x*y^2")
    rep = realize_model(mdl, RealizationSpec.point_count(3))
    assert rep["S_f_quotient"] == 2 and rep["S_f_quotient_residue"] == 2 == (-1) % 3
    assert rep["congruent"] and rep["assembly_matches"]
    hd = realize_model(mdl, RealizationSpec.hodge_deligne())
    assert hd["S_f_quotient"] == repr(UVPoly({(1, 1): 1, (0, 0): -1}))
    p1 = realize_model(gallery("P1-family"), RealizationSpec.point_count(7))
    assert p1["special_fiber"] == 8 and p1["R_residue"] == 1
    assert p1["generic_is_1_mod_L"] and p1["corollary_shadow_holds"]


def test_symbolic_models_need_images():
    mdl = gallery("x^2*y^3")
    spec = RealizationSpec.point_count(5, {"A": 3, "B": 2, "P": 1, "A~": 0, "B~": 0})
    rep = realize_model(mdl, spec)
    assert rep["congruent"]
