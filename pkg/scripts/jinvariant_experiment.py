"""Frobenius twists of y^2 = x^3 + ax + b over F_{p^2}: how often is j(E) = j(E^(p))?

For each p, counts curves with b^2/a^3 in F_p and outside it, and how many of
each have a twist with the same j-invariant.  The two columns should be
"all" and "none".
"""

import argparse

from mquot.jinv import all_curves, sampled_curves


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--primes", type=int, nargs="+", default=[5, 7, 11])
    ap.add_argument("--samples", type=int, default=10)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    print(f"{'p':>3} {'curves':>7} {'ratio in F_p':>13} {'  j equal':>9} {'ratio outside':>14} {'j equal':>8}")
    for p in args.primes:
        _, samples = all_curves(p)
        inside = [s for s in samples if s.ratio_in_prime_field]
        outside = [s for s in samples if not s.ratio_in_prime_field]
        print(f"{p:>3} {len(samples):>7} {len(inside):>13} {sum(s.j_equal for s in inside):>9} "
              f"{len(outside):>14} {sum(s.j_equal for s in outside):>8}")
        drawn = sampled_curves(p, args.samples, seed=args.seed)
        print(f"    {args.samples} random draws with ratio outside F_p: "
              f"{sum(not s.j_equal for s in drawn)} have j(E) != j(E^(p))")


if __name__ == "__main__":
    main()
