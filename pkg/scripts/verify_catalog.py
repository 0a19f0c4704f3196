"""Run the bundled catalog: quotient classes, oracle counts, d=1 invariant rings,
model congruences and their negative controls.  Prints a per-section summary.

    python3 scripts/verify_catalog.py [--jobs 4] [--seed 0] [--json out.jsonl]
"""

import argparse
import collections
import io
import sys
import time

from mquot.cli import RunConfig, format_machine, run


def main(argv=None):
    ap = argparse.ArgumentParser(description="verify the bundled catalog")
    ap.add_argument("--jobs", type=int, default=1)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--m", type=int, nargs="+", default=[1, 2])
    ap.add_argument("--json", help="also write the records here")
    args = ap.parse_args(argv)

    t0 = time.perf_counter()
    cfg = RunConfig("verify-catalog", m=args.m, seed=args.seed, jobs=args.jobs, output_format="table")
    status, records = run(cfg, stream=io.StringIO())
    elapsed = time.perf_counter() - t0

    by_section = collections.OrderedDict()
    for r in records:
        by_section.setdefault(r.get("section", "error"), []).append(r)
    for section, recs in by_section.items():
        bad = [r.get("item", "?") for r in recs if not r.get("pass")]
        print(f"{section:12s} {len(recs) - len(bad):3d}/{len(recs):<3d} pass" + (f"  failing: {bad}" if bad else ""))
    print(f"total {elapsed:.1f}s, exit status {status}")
    if args.json:
        with open(args.json, "w") as fh:
            fh.write(format_machine(records))
    return status


if __name__ == "__main__":
    sys.exit(main())
