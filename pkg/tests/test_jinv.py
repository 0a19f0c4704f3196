from mquot.gfq import FiniteField
from mquot.jinv import all_curves, j_invariant, sampled_curves, twist_sample


def test_j_of_prime_field_curve_over_f7():
    F = FiniteField(7, 2)
    a, b = F.scalar(1), F.scalar(1)
    # 1728 * 4 / (4 + 27) mod 7, computed with integers
    expected = (1728 * 4 * pow(31, -1, 7)) % 7
    assert j_invariant(F, a, b) == F.scalar(expected)
    s = twist_sample(F, a, b)
    assert s.ratio_in_prime_field and s.j_equal


def test_separation_exhaustive_p5():
    _, samples = all_curves(5)
    assert all(s.consistent for s in samples)
    assert any(not s.ratio_in_prime_field for s in samples)


def test_sampled_curves_are_separated():
    for p in (5, 7):
        for s in sampled_curves(p, 10, seed=p):
            assert not s.ratio_in_prime_field and not s.j_equal
