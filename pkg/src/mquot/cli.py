"""Command-line front end.

Every command produces a list of records (dicts).  ``--format machine`` prints
them as JSON lines with sorted keys; ``--format table`` renders the same
records.  Exit status: 0 success, 1 a check failed, 2 unparsable input,
3 budget exceeded.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from sympy import factorint

from . import catalog, jinv, mclass, nearby, oracle, quotient
from .action import SemiLinearAffineAction, validate
from .errors import BudgetExceeded, MquotError, ParseError
from .poly import Poly

COMMANDS = ("quotient-class", "invariant-ring", "point-count", "validate-action", "nearby-fiber",
            "motivic-reduction", "congruence-check", "realize", "verify-catalog")


class CheckFailed(MquotError):
    pass


@dataclass
class RunConfig:
    command: str
    inputs: list = field(default_factory=list)
    q: int | None = None
    m: list = field(default_factory=lambda: [1])
    hd: bool = False
    images: dict = field(default_factory=dict)
    max_degree: int = 64
    max_points: int = 200_000
    method: str = "fixed-point"
    output_format: str = "table"
    emit_trace: bool = False
    seed: int = 0
    jobs: int = 1
    actions_dir: str | None = None
    models_dir: str | None = None

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise ParseError(f"unknown command {self.command}")
        if self.max_degree < 1 or self.max_points < 1:
            raise ParseError("budget limits must be positive")
        if self.q is not None:
            f = factorint(self.q)
            if self.q < 2 or len(f) != 1:
                raise ParseError(f"q = {self.q} is not a prime power")
        if any(m < 1 for m in self.m):
            raise ParseError("m must be positive")

    @property
    def budget(self):
        return oracle.Budget(self.max_degree, self.max_points)


# --- input ---------------------------------------------------------------------

def _load_json(path):
    try:
        return json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ParseError(f"{path}: {exc}") from exc


def load_action(path) -> SemiLinearAffineAction:
    return SemiLinearAffineAction.from_document(_load_json(path))


def load_model(path) -> nearby.SncModel:
    return nearby.SncModel.from_document(_load_json(path))


def _need_input(cfg):
    if not cfg.inputs:
        raise ParseError(f"{cfg.command} needs an input file")
    return cfg.inputs


# --- commands ------------------------------------------------------------------

def cmd_quotient_class(cfg):
    out = []
    for path in _need_input(cfg):
        a = load_action(path)
        cls, trace = quotient.quotient_class(a, cfg.budget)
        rec = {"command": "quotient-class", "action": a.name, "class": str(cls), "ring_tag": str(cls.tag),
               "document": cls.to_document()}
        if cfg.emit_trace:
            rec["trace"] = trace.to_record()
        out.append(rec)
    return out, True


def cmd_invariant_ring(cfg):
    out, ok = [], True
    for path in _need_input(cfg):
        a = load_action(path)
        res = quotient.invariant_ring_d1(a)
        inv = quotient.invariant_check(res.generator_poly, a)
        replay = quotient.replay_trace(a, res)
        ok &= inv and replay
        rec = {"command": "invariant-ring", "action": a.name, "generator": repr(res.generator_poly),
               "degree": res.degree, "base_field_degree": res.base_field_degree,
               "invariant": inv, "replay": replay, "cases": res.trace.kinds()}
        if cfg.emit_trace:
            rec["trace"] = res.trace.to_record()
        out.append(rec)
    return out, ok


def cmd_point_count(cfg):
    out, ok = [], True
    for path in _need_input(cfg):
        a = load_action(path)
        for m in cfg.m:
            r = oracle.oracle_report(a, m, cfg.budget, cfg.method)
            expected = a.q ** (m * a.d)
            ok &= r.count == expected
            out.append({"command": "point-count", "action": a.name, "m": m, "count": r.count,
                        "expected": expected, "match": r.count == expected, "N": r.N,
                        "points": r.points, "burnside": r.burnside})
    return out, ok


def cmd_validate_action(cfg):
    out, ok = [], True
    for path in _need_input(cfg):
        a = load_action(path)
        rep = validate(a)
        ok &= rep.ok
        out.append({"command": "validate-action", "action": a.name, **rep.to_record()})
    return out, ok


def cmd_nearby_fiber(cfg):
    out = []
    for path in _need_input(cfg):
        mdl = load_model(path)
        S = nearby.nearby_fiber(mdl)
        Sq = nearby.nearby_fiber_quotient(mdl)
        out.append({"command": "nearby-fiber", "model": mdl.name, "S_f": str(S), "S_f_tag": str(S.tag),
                    "S_f_quotient": str(Sq), "S_f_document": S.to_document(),
                    "S_f_quotient_document": Sq.to_document()})
    return out, True


def cmd_motivic_reduction(cfg):
    out = []
    for path in _need_input(cfg):
        mdl = load_model(path)
        R = nearby.motivic_reduction(mdl)
        out.append({"command": "motivic-reduction", "model": mdl.name, "R": str(R), "document": R.to_document()})
    return out, True


def cmd_congruence_check(cfg):
    out, ok = [], True
    for path in _need_input(cfg):
        mdl = load_model(path)
        holds, witness = nearby.congruence_check(mdl)
        ok &= holds
        out.append({"command": "congruence-check", "model": mdl.name, "holds": holds, "witness": str(witness)})
    return out, ok


def _spec(cfg):
    if cfg.hd:
        imgs = {}
        for k, v in cfg.images.items():
            imgs[k] = mclass.UVPoly({tuple(int(x) for x in key.split(",")): c for key, c in v.items()}) \
                if isinstance(v, dict) else mclass.UVPoly.const(int(v))
        return mclass.RealizationSpec.hodge_deligne(imgs)
    if cfg.q is None:
        raise ParseError("realize needs --q or --hd")
    return mclass.RealizationSpec.point_count(cfg.q, {k: int(v) for k, v in cfg.images.items()})


def cmd_realize(cfg):
    out, ok = [], True
    spec = _spec(cfg)
    for path in _need_input(cfg):
        doc = _load_json(path)
        if "ring_tag" in doc:
            c = mclass.MotivicClass.from_document(doc)
            val = mclass.realize(c, spec)
            out.append({"command": "realize", "class": str(c), "value": val if isinstance(val, int) else repr(val)})
        else:
            mdl = nearby.SncModel.from_document(doc)
            rep = nearby.realize_model(mdl, spec)
            ok &= rep["assembly_matches"] and rep["congruent"] and rep.get("corollary_shadow_holds", True)
            out.append({"command": "realize", **rep})
    return out, ok


# verify-catalog work items are module-level so worker processes can run them

def _verify_action(args):
    doc, ms, budget = args
    a = SemiLinearAffineAction.from_document(doc)
    rec = {"section": "action", "item": a.name, "d": a.d, "q": a.q}
    try:
        cls, _ = quotient.quotient_class(a)
        counts = {m: oracle.orbit_count_oracle(a, m, budget) for m in ms}
        rec["class"] = str(cls)
        rec["counts"] = {str(m): c for m, c in counts.items()}
        ok = all(c == a.q ** (m * a.d) for m, c in counts.items()) and cls == mclass.MotivicClass.lefschetz(
            a.d, cls.tag)
        if a.d == 1:
            res = quotient.invariant_ring_d1(a)
            rec["generator"] = repr(res.generator_poly)
            rec["cases"] = res.trace.kinds()
            gen_counts = [quotient.generator_point_count(a, res, m, budget) for m in ms]
            ok &= quotient.invariant_check(res.generator_poly, a) and quotient.replay_trace(a, res)
            ok &= all(g["ok"] for g in gen_counts)
        rec["pass"] = ok
    except BudgetExceeded as exc:
        rec["pass"] = False
        rec["error"] = f"BudgetExceeded: {exc}"
    return rec


def cmd_verify_catalog(cfg):
    budget = cfg.budget
    if cfg.actions_dir:
        docs = [_load_json(p) for p in sorted(Path(cfg.actions_dir).glob("*.json"))]
    else:
        docs = [a.to_document() for a in catalog.actions()]
    jobs = [(d, tuple(cfg.m), budget) for d in docs]
    if cfg.jobs > 1:
        with ProcessPoolExecutor(cfg.jobs) as ex:
            records = list(ex.map(_verify_action, jobs))
    else:
        records = [_verify_action(j) for j in jobs]

    for p in (2, 3, 5):
        a = catalog.exinsep(p)
        K = a.K
        y, x = Poly.var(K, 2, 0), Poly.var(K, 2, 1)
        inv = x ** p + y ** (p - 1) * x * K.scalar(p - 1)
        counts = {m: oracle.orbit_count_oracle(a, m, budget) for m in cfg.m}
        ok = (quotient.invariant_check(inv, a) and quotient.invariant_check(y, a)
              and not quotient.invariant_check(x, a) and all(c == p ** (2 * m) for m, c in counts.items()))
        records.append({"section": "exinsep", "item": f"p={p}", "counts": {str(m): c for m, c in counts.items()},
                        "pass": ok})

    models = ([load_model(p) for p in sorted(Path(cfg.models_dir).glob("*.json"))]
              if cfg.models_dir else catalog.models() + catalog.mutated_models())
    for mdl in models:
        holds, witness = nearby.congruence_check(mdl)
        expect = not mdl.notes.startswith("mutation of")
        records.append({"section": "model", "item": mdl.name, "expect_congruent": expect, "holds": holds,
                        "witness": str(witness), "pass": holds == expect})

    rng = random.Random(cfg.seed)
    bad = 0
    for codim in range(1, 9):
        for _ in range(100):
            ctr, amb = _random_class(rng), _random_class(rng)
            bad += not nearby.blowup_step_identity(nearby.BlowupStep(codim, ctr, amb))
    records.append({"section": "blowup", "item": "codim 1..8 x 100", "seed": cfg.seed, "failures": bad,
                    "pass": bad == 0})

    for p in (5, 7):
        _, samples = jinv.all_curves(p)
        separated = sum(1 for s in samples if not s.ratio_in_prime_field)
        records.append({"section": "j-invariant", "item": f"p={p}", "curves": len(samples),
                        "ratio_outside_Fp": separated, "pass": all(s.consistent for s in samples)})
    return records, all(r["pass"] for r in records)


def _random_class(rng, symbols=("A", "B", "C")):
    body = {}
    for _ in range(rng.randint(0, 4)):
        mono = tuple(sorted(rng.choice(symbols) for _ in range(rng.randint(0, 2))))
        body[mono] = mclass.LefschetzPoly({rng.randint(0, 3): rng.randint(-5, 5)})
    return mclass.MotivicClass(mclass.K0, body)


HANDLERS = {
    "quotient-class": cmd_quotient_class,
    "invariant-ring": cmd_invariant_ring,
    "point-count": cmd_point_count,
    "validate-action": cmd_validate_action,
    "nearby-fiber": cmd_nearby_fiber,
    "motivic-reduction": cmd_motivic_reduction,
    "congruence-check": cmd_congruence_check,
    "realize": cmd_realize,
    "verify-catalog": cmd_verify_catalog,
}


# --- output --------------------------------------------------------------------

def format_machine(records):
    return "".join(json.dumps(r, sort_keys=True, separators=(",", ":")) + "\n" for r in records)


def format_table(records):
    """Human-readable view derived from the machine records."""
    if not records:
        return ""
    skip = {"document", "S_f_document", "S_f_quotient_document", "trace"}
    cols = []
    for r in records:
        for k in r:
            if k not in cols and k not in skip:
                cols.append(k)
    cell = lambda v: v if isinstance(v, str) else json.dumps(v, sort_keys=True, separators=(",", ":"))
    rows = [[cell(r.get(c, "")) for c in cols] for r in records]
    widths = [max(len(c), *(len(row[i]) for row in rows)) for i, c in enumerate(cols)]
    lines = ["  ".join(c.ljust(w) for c, w in zip(cols, widths)).rstrip()]
    lines.append("  ".join("-" * w for w in widths))
    lines += ["  ".join(v.ljust(w) for v, w in zip(row, widths)).rstrip() for row in rows]
    extra = [json.dumps(r["trace"], sort_keys=True, indent=1) for r in records if "trace" in r]
    return "\n".join(lines + extra) + "\n"


def run(cfg: RunConfig, stream=None):
    """Execute ``cfg``; returns (exit status, records)."""
    stream = stream or sys.stdout
    try:
        records, ok = HANDLERS[cfg.command](cfg)
        status = 0 if ok else 1
    except ParseError as exc:
        records, status = [{"command": cfg.command, "error": "ParseError", "message": str(exc)}], 2
    except BudgetExceeded as exc:
        records, status = [{"command": cfg.command, "error": "BudgetExceeded", "message": str(exc),
                            "required_N": exc.required}], 3
    except MquotError as exc:
        records, status = [{"command": cfg.command, "error": type(exc).__name__, "message": str(exc),
                            **({"failed_checks": list(exc.failed_checks)} if hasattr(exc, "failed_checks") else {})}], 1
    stream.write(format_machine(records) if cfg.output_format == "machine" else format_table(records))
    return status, records


def build_parser():
    ap = argparse.ArgumentParser(prog="mquot", description=__doc__.splitlines()[0])
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("inputs", nargs="*", help="action, model or class files (JSON)")
    ap.add_argument("--q", type=int, help="point-count realization at F_q")
    ap.add_argument("--m", type=int, nargs="+", default=None, help="extension degrees (default 1, or 1 2)")
    ap.add_argument("--hd", action="store_true", help="Hodge–Deligne realization, L -> uv")
    ap.add_argument("--image", action="append", default=[], metavar="NAME=VALUE",
                    help="symbol image; integer, or JSON {\"a,b\": c} for u^a v^b terms")
    ap.add_argument("--max-degree", type=int, default=64)
    ap.add_argument("--max-points", type=int, default=200_000)
    ap.add_argument("--method", choices=("fixed-point", "enumerate"), default="fixed-point")
    ap.add_argument("--format", dest="output_format", choices=("table", "machine"), default="table")
    ap.add_argument("--emit-trace", action="store_true")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--jobs", type=int, default=1)
    ap.add_argument("--actions", dest="actions_dir")
    ap.add_argument("--models", dest="models_dir")
    return ap


def main(argv=None):
    ap = build_parser()
    try:
        ns = ap.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    images = {}
    try:
        for item in ns.image:
            name, _, val = item.partition("=")
            images[name] = json.loads(val)
        m = ns.m or ([1, 2] if ns.command == "verify-catalog" else [1])
        cfg = RunConfig(ns.command, ns.inputs, ns.q, m, ns.hd, images, ns.max_degree, ns.max_points,
                        ns.method, ns.output_format, ns.emit_trace, ns.seed, ns.jobs, ns.actions_dir, ns.models_dir)
    except (ParseError, json.JSONDecodeError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    status, _ = run(cfg)
    return status


if __name__ == "__main__":
    sys.exit(main())
