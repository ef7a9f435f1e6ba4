"""Command line entry point.

Exit codes: 0 success, 2 input could not be parsed, 3 a verification failed.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .batch import ParseError, content_hash, default_jobs, run_batch
from .examples import WORKED, parse_weight
from .matroid import classify_template, qsp
from .quadext import verify_qsp_algebra
from .rings import dim_thin_schubert
from .subdivision import Weight, check_witness, regular_subdivision
from .tightspan import TightSpan, find_fins, prune_leaves
from .verify import AuditFailure, Certificate, ClassificationFailure, classify, dimension_audit, verify

EXIT_OK, EXIT_PARSE, EXIT_FAIL = 0, 2, 3


class InputError(ValueError):
    pass


def load_weight(text: str, n: int = 8, r: int = 3) -> Weight:
    """A worked-example name, a path to weight JSON, or a sum like ``e126+2e345``."""
    if text in WORKED:
        return WORKED[text]
    try:
        if text.lstrip().startswith("{"):
            return Weight.from_json(text)
        path = Path(text)
        if path.is_file():
            return Weight.from_json(path.read_text())
        return parse_weight(text, n=n, r=r)
    except (OSError, ValueError, KeyError) as exc:
        raise InputError(str(exc)) from exc


def _emit(obj, out_dir, name):
    text = json.dumps(obj, indent=1, sort_keys=True)
    if out_dir:
        d = Path(out_dir)
        d.mkdir(parents=True, exist_ok=True)
        (d / name).write_text(text)
    print(text)


def cmd_subdivide(args):
    w = load_weight(args.weight, args.n, args.r)
    S = regular_subdivision(w)
    cells = []
    for k, c in enumerate(S.cells):
        a, b = c.witness
        cells.append({
            "vertex": k + 1,
            "bases": len(c.bases),
            "template": str(classify_template(c.matroid)) if c.is_matroid() else "non-matroidal",
            "matroid": c.matroid.to_json() if c.is_matroid() else None,
            "witness": {"a": [str(x) for x in a], "b": str(b)},
            "witness_ok": check_witness(S, c),
        })
    adj = [[i + 1, j + 1] for i, j, _ in S.adjacency]
    _emit({"cells": cells, "adjacency": adj}, args.out, "subdivision.json")
    return EXIT_OK


def cmd_tightspan(args):
    w = load_weight(args.weight, args.n, args.r)
    ts = TightSpan(regular_subdivision(w))
    T = ts.full
    L, pairs = prune_leaves(T)
    fins = find_fins(L)
    data = {
        "vertices": [{"vertex": v + 1, "template": str(classify_template(ts.vertex_matroid(v)))}
                     for v in sorted(T.verts)],
        "edges": [[a + 1, b + 1] for a, b in sorted(T.edges)],
        "faces": [[v + 1 for v in ts.face_cycles[f]] for f in sorted(T.faces)],
        "leaves": [v + 1 for v, _ in pairs],
        "fins": [{"order": [v + 1 for v in F.order], "length": F.length} for F in fins],
    }
    _emit(data, args.out, "tightspan.json")
    return EXIT_OK


def cmd_classify(args):
    w = load_weight(args.weight, args.n, args.r)
    try:
        label = classify(w)
    except ClassificationFailure as exc:
        print(f"classification failed: {exc}", file=sys.stderr)
        return EXIT_FAIL
    print(label)
    return EXIT_OK


def cmd_verify(args):
    w = load_weight(args.weight, args.n, args.r)
    c = verify(w, seed=args.seed)
    _emit(c.to_json(), args.out, f"{content_hash(w)}.json")
    print(f"{c.group} {c.status} smooth={c.smooth} components={c.components} dimension={c.dimension}",
          file=sys.stderr)
    return EXIT_FAIL if args.strict and not c.verified else EXIT_OK


def cmd_batch(args):
    try:
        summary = run_batch(args.path, args.out, jobs=args.jobs, mode=args.mode,
                            seed=args.seed, strict=args.strict)
    except (ParseError, OSError) as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    print(json.dumps(summary.to_json(), indent=1, sort_keys=True))
    return EXIT_OK if summary.ok else EXIT_FAIL


def cmd_qsp_check(args):
    report = verify_qsp_algebra()
    dim = dim_thin_schubert(qsp())
    report["dimension"] = dim.dim
    report["components"] = dim.components
    report.pop("minors")
    ok = report["ok"] and dim.dim == 7 and dim.components == 2
    print(json.dumps(report, indent=1))
    return EXIT_OK if ok else EXIT_FAIL


def cmd_audit(args):
    try:
        c = Certificate.from_json(Path(args.certificate).read_text())
    except (OSError, ValueError, KeyError) as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    try:
        ok = dimension_audit(c, recompute=args.recompute)
    except AuditFailure as exc:
        print(f"audit failed: {exc}", file=sys.stderr)
        return EXIT_FAIL
    print("audit passed" if ok else "certificate is unverified")
    return EXIT_OK if ok or not args.strict else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="grschoen", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, weight=True):
        if weight:
            sp.add_argument("weight", help="example name, weight JSON file, or e.g. 'e126+2e345'")
            sp.add_argument("-n", type=int, default=8)
            sp.add_argument("-r", type=int, default=3)
        sp.add_argument("--out", help="directory for output files")
        sp.add_argument("--seed", type=int, default=0, help="seed for soundness sampling")
        sp.add_argument("--strict", action="store_true", help="fail on any unverified certificate")
        sp.add_argument("--jobs", type=int, default=None, help="worker processes (default from GRSCHOEN_JOBS)")

    for name, fn in (("subdivide", cmd_subdivide), ("tightspan", cmd_tightspan),
                     ("classify", cmd_classify), ("verify", cmd_verify)):
        sp = sub.add_parser(name)
        common(sp)
        sp.set_defaults(func=fn)

    sp = sub.add_parser("batch", help="verify a JSON-lines file of cone records")
    sp.add_argument("path")
    common(sp, weight=False)
    mode = sp.add_mutually_exclusive_group()
    mode.add_argument("--orbits", dest="mode", action="store_const", const="orbits",
                      help="records are orbit representatives (default)")
    mode.add_argument("--all-cones", dest="mode", action="store_const", const="all-cones",
                      help="records may repeat orbits; duplicates are skipped")
    sp.set_defaults(func=cmd_batch, mode="orbits")

    sp = sub.add_parser("qsp-check", help="check the realization of the special matroid")
    common(sp, weight=False)
    sp.set_defaults(func=cmd_qsp_check)

    sp = sub.add_parser("audit", help="re-sum the dimension terms of a certificate")
    sp.add_argument("certificate")
    sp.add_argument("--recompute", action="store_true", help="recompute every matroid dimension")
    common(sp, weight=False)
    sp.set_defaults(func=cmd_audit)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "jobs", None) is None:
        args.jobs = default_jobs()
    try:
        return args.func(args)
    except InputError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
