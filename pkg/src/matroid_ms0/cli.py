"""Command-line front end.

Every command writes a JSON report to stdout (or an artifact, for ``gen``,
``tree`` and ``represent`` without ``--out``) and a one-line summary to
stderr.  Exit codes: 0 ok, 1 property failed, 2 input error, 3 budget
refused.
"""

from __future__ import annotations

import argparse
import hashlib
import inspect
import json
import sys
import time
from pathlib import Path

from . import __version__
from .checks import CHECKS
from .errors import BudgetExceeded, InputError
from .gain import GainGroup, build_delta, build_gamma, glue_hoop_loop, incidence_matrix
from .io import load_gain_graph, load_matroid, read_json
from .amalgam import AmalgamMatroid, AmalgamSpec
from .logic import estimate_cost, evaluate, normalize_prenex, parse, to_text
from .logic.formula import size
from .logic.sentences import StackedMatroid
from .matroid import gen_pg2, gen_uniform
from .registry import partition, side_role, tree_dump, tree_of, TreeStore

EXIT_OK, EXIT_FAILED, EXIT_INPUT, EXIT_BUDGET = 0, 1, 2, 3
DEFAULT_BUDGET = 1 << 30


class Run:
    """Accumulates the report for one command."""

    def __init__(self, args):
        self.args = args
        self.t0 = time.perf_counter()
        self.report = {"command": args.command, "seed": args.seed, "inputs": {}, "verdicts": {}, "counters": {}}

    def input(self, path, digest: str | None = None):
        if digest is None:
            digest = hashlib.sha256(Path(path).read_bytes()).hexdigest()
        self.report["inputs"][str(path)] = "sha256:" + digest

    def finish(self, summary: str, artifact=None) -> None:
        self.report["wall_time"] = round(time.perf_counter() - self.t0, 3)
        out = self.args.out
        if artifact is not None and out:
            Path(out).write_text(json.dumps(artifact, indent=2) + "\n")
            self.report["output"] = str(out)
            print(json.dumps(self.report, indent=2))
        elif artifact is not None:
            print(json.dumps(artifact, indent=2))
        else:
            text = json.dumps(self.report, indent=2)
            if out:
                Path(out).write_text(text + "\n")
            print(text)
        print(summary, file=sys.stderr)


def _formula_text(args) -> tuple[str, str | None]:
    if args.text is not None:
        return args.text, None
    if args.formula is None:
        raise InputError("give a formula file or --text")
    try:
        raw = Path(args.formula).read_bytes() if args.formula != "-" else sys.stdin.buffer.read()
    except OSError as exc:
        raise InputError(f"cannot read {args.formula}: {exc.strerror}") from None
    return raw.decode("utf-8"), hashlib.sha256(raw).hexdigest()


# commands


def cmd_check(args) -> int:
    run = Run(args)
    text, digest = _formula_text(args)
    if digest:
        run.input(args.formula, digest)
    f = parse(text, strict=args.strict)
    fresh = sorted(v for v in f.var if v.startswith("_"))
    prenex = normalize_prenex(f)
    run.report["verdicts"]["valid"] = True
    run.report["result"] = {
        "core": to_text(f),
        "var": sorted(f.var),
        "fr": sorted(f.fr),
        "k": len(f.var),
        "fresh_variables": len(fresh),
        "size": size(f),
        "prenex": to_text(prenex),
        "prenex_k": len(prenex.var),
    }
    run.finish(f"valid formula, k={len(f.var)}, {len(f.fr)} free, {len(fresh)} fresh")
    return EXIT_OK


def _assignment(pairs: list[str]) -> dict:
    out = {}
    for p in pairs or []:
        name, _, labels = p.partition("=")
        if not _:
            raise InputError(f"assignment {p!r} is not NAME=a,b,...")
        out[name.strip()] = [e for e in labels.split(",") if e]
    return out


def cmd_eval(args) -> int:
    run = Run(args)
    M, mdigest = load_matroid(args.matroid, allow_non_matroid=True)
    run.input(args.matroid, mdigest)
    text, digest = _formula_text(args)
    if digest:
        run.input(args.formula, digest)
    f = parse(text)
    est = estimate_cost(f, M.n)
    run.report["counters"].update({"elements": M.n, "estimated_cost": est, "budget": args.budget})
    value = evaluate(M, f, _assignment(args.assign), budget=args.budget)
    run.report["verdicts"]["satisfied"] = value
    run.finish(f"{'true' if value else 'false'} on {M.n} elements (estimate {est})")
    return EXIT_OK if value else EXIT_FAILED


def _group(args) -> GainGroup:
    return GainGroup.field_units(args.p, args.generator)


def cmd_gen(args) -> int:
    run = Run(args)
    kind = args.kind
    if kind == "uniform":
        obj = gen_uniform(args.r, args.n).to_json()
    elif kind == "pg2":
        obj = gen_pg2(args.q).to_json()
    elif kind == "gamma":
        obj = build_gamma(args.s, _group(args), args.alpha).frame_matroid().to_json()
    elif kind == "delta":
        obj = build_delta(args.t, _group(args), args.alpha).frame_matroid().to_json()
    elif kind == "glue":
        G = build_gamma(args.s, _group(args), args.alpha)
        D = build_delta(args.t, _group(args), args.alpha)
        obj = glue_hoop_loop(G, D).frame_matroid().to_json()
    elif kind == "amalgam":
        if not (args.m1 and args.m2):
            raise InputError("gen amalgam needs --m1 and --m2 matroid files")
        m1, d1 = load_matroid(args.m1)
        m2, d2 = load_matroid(args.m2)
        run.input(args.m1, d1)
        run.input(args.m2, d2)
        obj = AmalgamMatroid(AmalgamSpec(m1, m2)).to_json()
    else:  # argparse restricts the choices
        raise InputError(f"unknown kind {kind}")
    run.report["counters"]["elements"] = len(obj["elements"])
    run.finish(f"generated {kind} with {len(obj['elements'])} elements", artifact=obj)
    return EXIT_OK


def _parse_orders(text: str) -> range:
    lo, sep, hi = text.partition("..")
    try:
        return range(int(lo), int(hi) + 1) if sep else range(int(lo), int(lo) + 1)
    except ValueError:
        raise InputError(f"orders must look like 1..200, got {text!r}") from None


def cmd_verify(args) -> int:
    run = Run(args)
    fn = CHECKS.get(args.name)
    if fn is None:
        raise InputError(f"unknown check {args.name!r}; choose from {sorted(CHECKS)}")
    given = {
        "seed": args.seed, "max_edges": args.max_edges, "p": args.p, "s": args.s, "t": args.t,
        "generator": args.generator, "samples": args.samples, "pairs": args.pairs,
        "sentences": args.sentences, "specs": args.specs,
        "orders": _parse_orders(args.orders) if args.orders else None,
    }
    params = inspect.signature(fn).parameters
    kwargs = {k: v for k, v in given.items() if v is not None and k in params}
    res = fn(**kwargs)
    run.report["verdicts"][res.name] = res.passed
    run.report["counters"] = res.counters
    run.report["counterexample"] = res.counterexample
    run.report["notes"] = res.notes
    run.finish(f"{res.name}: {'PASS' if res.passed else 'FAIL'} in {res.seconds:.1f}s")
    return EXIT_OK if res.passed else EXIT_FAILED


def cmd_partition(args) -> int:
    run = Run(args)
    family = []
    for path in args.matroids:
        M, d = load_matroid(path)
        run.input(path, d)
        if args.variant == 2 and side_role(M) != "hoop":
            raise InputError(f"{path}: variant 2 partitions hoop matroids only")
        family.append(M)
    if not family:
        raise InputError("partition needs at least one matroid file")
    res = partition(family, args.k, args.variant)
    run.report["result"] = {
        "blocks": [[args.matroids[i] for i in b] for b in res["blocks"]],
        "block_count": res["block_count"],
        "bound": str(res["bound"]),
    }
    run.report["verdicts"]["within_bound"] = res["within_bound"]
    bound_name = "f1" if args.variant == 1 else "f2"
    run.finish(f"{res['block_count']} block(s); bound {bound_name}({args.k}) = {res['bound']}")
    return EXIT_OK if res["within_bound"] else EXIT_FAILED


def cmd_tree(args) -> int:
    run = Run(args)
    M, d = load_matroid(args.matroid)
    run.input(args.matroid, d)
    store = TreeStore()
    t = tree_of(StackedMatroid(M, ()), args.k, args.variant, store, budget=args.budget)
    run.report["counters"].update({"depth": t.depth, "children": len(t.children), "interned": len(store)})
    run.finish(f"depth-{t.depth} tree with {len(t.children)} children", artifact=tree_dump(t))
    return EXIT_OK


def cmd_represent(args) -> int:
    run = Run(args)
    G, d = load_gain_graph(args.graph)
    run.input(args.graph, d)
    A = incidence_matrix(G)
    obj = {"elements": list(A.col_labels), "def": {"kind": "matrix", "p": A.p, "rows": [list(r) for r in A.rows]}}
    run.report["counters"]["shape"] = list(A.shape)
    run.finish(f"{A.shape[0]}x{A.shape[1]} matrix over GF({A.p})", artifact=obj)
    return EXIT_OK


# parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="seed for randomised checks (default 0)")
    common.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="refuse work estimated above this (default 2^30)")
    common.add_argument("--variant", type=int, choices=(1, 2), default=1, help="registry variant")
    common.add_argument("--k", type=int, default=1, help="number of set variables for trees")
    common.add_argument("--out", help="write the artifact or report to this file")

    p = argparse.ArgumentParser(prog="matroid-ms0", description="Matroid logic toolkit.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("check", parents=[common], help="parse and validate a formula")
    c.add_argument("formula", nargs="?", help="formula file ('-' for stdin)")
    c.add_argument("--text", help="formula given inline")
    c.add_argument("--strict", action="store_true", help="reject variable clashes instead of renaming")
    c.set_defaults(func=cmd_check)

    e = sub.add_parser("eval", parents=[common], help="evaluate a formula on a matroid")
    e.add_argument("matroid", help="matroid JSON file")
    e.add_argument("formula", nargs="?", help="formula file")
    e.add_argument("--text", help="formula given inline")
    e.add_argument("--assign", action="append", metavar="NAME=a,b", help="value of a free variable")
    e.set_defaults(func=cmd_eval)

    g = sub.add_parser("gen", parents=[common], help="generate a matroid file")
    g.add_argument("kind", choices=["uniform", "pg2", "gamma", "delta", "glue", "amalgam"])
    g.add_argument("--r", type=int, default=2)
    g.add_argument("--n", type=int, default=4)
    g.add_argument("--q", type=int, default=2)
    g.add_argument("--s", type=int, default=3)
    g.add_argument("--t", type=int, default=3)
    g.add_argument("--p", type=int, default=17)
    g.add_argument("--generator", type=int, default=None, help="generator of the unit group")
    g.add_argument("--alpha", type=int, default=1, help="gain exponent of alpha (and beta)")
    g.add_argument("--m1", help="first matroid file (amalgam)")
    g.add_argument("--m2", help="second matroid file (amalgam)")
    g.set_defaults(func=cmd_gen)

    v = sub.add_parser("verify", parents=[common], help="run a named verification")
    v.add_argument("name", help=", ".join(sorted(CHECKS)))
    for flag in ("--max-edges", "--p", "--s", "--t", "--generator", "--samples", "--pairs", "--sentences", "--specs"):
        v.add_argument(flag, type=int)
    v.add_argument("--orders", help="modulus range such as 1..200")
    v.set_defaults(func=cmd_verify)

    pa = sub.add_parser("partition", parents=[common], help="group matroids by depth-k tree")
    pa.add_argument("matroids", nargs="+")
    pa.set_defaults(func=cmd_partition)

    t = sub.add_parser("tree", parents=[common], help="dump the canonical depth-k tree")
    t.add_argument("matroid")
    t.set_defaults(func=cmd_tree)

    r = sub.add_parser("represent", parents=[common], help="matrix representation of a gain graph")
    r.add_argument("graph", help="gain-graph JSON (bare or as a gain_graph matroid)")
    r.set_defaults(func=cmd_represent)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except BudgetExceeded as exc:
        print(json.dumps({"command": args.command, "refused": True, "estimate": exc.estimate, "budget": exc.budget}))
        print(f"refused: estimated cost {exc.estimate} exceeds budget {exc.budget}", file=sys.stderr)
        return EXIT_BUDGET
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
