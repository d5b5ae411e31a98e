"""``patmatch`` command line.

Exit codes: 0 match found (or command succeeded), 1 no match, 2 bad input.
"""

from __future__ import annotations

import argparse
import csv
import io as _io
import random
import sys
import time

from . import io
from .bench import loglog_slope, run_suite
from .checks import run_selftest
from .errors import PatmatchError
from .generators import (
    gen_lattice,
    gen_planted_affine,
    gen_planted_similarity,
    gen_random_pattern,
    gen_random_scene,
    random_affine,
    random_similarity,
)
from .geometry import find_affine, find_all_affine, find_all_similar, find_similar
from .ksum import KSumInstance, solve
from .model import AFFINE, SIMILARITY
from .numeric import Ring, Scalar

EXIT_MATCH, EXIT_NO_MATCH, EXIT_ERROR = 0, 1, 2
STRATEGY_CHOICES = ("auto", "brute", "mitm", "quad3sum")


def _emit(text: str, out):
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _report(kind, reports, enumerate_all):
    if enumerate_all:
        return {"match": bool(reports), "kind": kind, "count": len(reports),
                "matches": [io.report_to_json(r) for r in reports]}
    if not reports:
        return {"match": False}
    out = {"match": True, "kind": kind}
    out.update(io.report_to_json(reports[0]))
    return out


def _load_pair(args, kind):
    pattern = io.pattern_from_json(io.read(args.pattern), kind)
    scene = io.scene_from_json(io.read(args.scene))
    if scene.d != pattern.d:
        raise PatmatchError(f"pattern is {pattern.d}-dimensional, scene is {scene.d}-dimensional")
    if args.dedup:
        scene = scene.deduplicated()
    return pattern, scene


def cmd_similarity(args) -> int:
    P, S = _load_pair(args, SIMILARITY)
    if args.enumerate:
        reports = find_all_similar(P, S, args.strategy, args.seed, args.orientation)
    else:
        r = find_similar(P, S, args.strategy, args.seed, args.orientation)
        reports = [r] if r else []
    _emit(io.dumps(_report(SIMILARITY, reports, args.enumerate)), args.out)
    return EXIT_MATCH if reports else EXIT_NO_MATCH


def cmd_affine(args) -> int:
    P, S = _load_pair(args, AFFINE)
    if args.enumerate:
        reports = find_all_affine(P, S, args.strategy, args.seed)
    else:
        r = find_affine(P, S, args.strategy, args.seed)
        reports = [r] if r else []
    _emit(io.dumps(_report(AFFINE, reports, args.enumerate)), args.out)
    return EXIT_MATCH if reports else EXIT_NO_MATCH


def cmd_ksum(args) -> int:
    inst = io.instance_from_json(io.read(args.instance))
    mode = "enumerate" if args.enumerate else "decide"
    result = solve(inst, args.strategy, args.seed, mode)
    if args.enumerate:
        body = {"match": result.found, "count": len(result.solutions),
                "solutions": [io.solution_to_json(s) for s in result.solutions]}
    elif result.found:
        body = {"match": True, **io.solution_to_json(result.solution)}
    else:
        body = {"match": False}
    _emit(io.dumps(body), args.out)
    return EXIT_MATCH if result.found else EXIT_NO_MATCH


def cmd_bench(args) -> int:
    sizes = [int(x) for x in args.sizes.split(",")] if args.sizes else None
    buf = _io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["kind", "suite", "k", "n", "seconds", "ops", "slope"])
    for (suite, k), rows in run_suite(args.suite, sizes, args.seed, args.epsilon).items():
        for r in rows:
            writer.writerow(["run", suite, k, r.n, f"{r.seconds:.6f}", r.ops, ""])
        writer.writerow(["fit", suite, k, "", "", "", f"{loglog_slope(rows):.4f}"])
    _emit(buf.getvalue(), args.out)
    return EXIT_MATCH


def cmd_gen(args) -> int:
    rng = random.Random(args.seed)
    lo, hi = args.range
    if args.kind == "lattice":
        body = io.points_to_json(gen_lattice(args.d, args.m))
    elif args.kind == "random":
        body = io.points_to_json(gen_random_scene(args.d, args.n, (lo, hi), args.seed))
    elif args.kind == "planted-similarity":
        P = gen_random_pattern(SIMILARITY, args.k, seed=args.seed)
        w, z = random_similarity(rng)
        S = gen_planted_similarity(P, args.n, w, z, args.mirrored, args.seed, (lo, hi))
        body = {"pattern": io.points_to_json(P), "scene": io.points_to_json(S)}
    elif args.kind == "planted-affine":
        P = gen_random_pattern(AFFINE, args.k, args.d, seed=args.seed)
        F, t = random_affine(rng, args.d)
        S = gen_planted_affine(P, args.n, F, t, args.seed, (lo, hi))
        body = {"pattern": io.points_to_json(P), "scene": io.points_to_json(S)}
    else:  # ksum
        sets = [[Scalar(rng.randint(lo, hi)) for _ in range(args.n)] for _ in range(args.k)]
        body = io.instance_to_json(KSumInstance(Ring("scalar"), sets))
    if "pattern" in body and args.out:
        # planted pairs go to <out>.pattern.json / <out>.scene.json
        _emit(io.dumps(body["pattern"]), f"{args.out}.pattern.json")
        _emit(io.dumps(body["scene"]), f"{args.out}.scene.json")
    else:
        _emit(io.dumps(body), args.out)
    return EXIT_MATCH


def cmd_selftest(args) -> int:
    t0 = time.perf_counter()
    results = run_selftest(args.scale, args.seed)
    for r in results:
        print(r.line())
    ok = all(r.passed for r in results)
    print(f"selftest {'passed' if ok else 'FAILED'} in {time.perf_counter() - t0:.1f}s")
    return EXIT_MATCH if ok else EXIT_NO_MATCH


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="patmatch",
        description="Exact similarity/affine pattern matching via k-SUM reductions.")
    sub = parser.add_subparsers(dest="command", required=True)

    def solver_flags(p):
        p.add_argument("--strategy", choices=STRATEGY_CHOICES, default="auto")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--enumerate", action="store_true", help="report every match")
        p.add_argument("--out", help="write the JSON report here instead of stdout")

    p = sub.add_parser("similarity", help="search a scene for a similar copy of a pattern")
    p.add_argument("pattern")
    p.add_argument("scene")
    p.add_argument("--orientation", choices=("direct", "mirrored", "both"), default="both")
    p.add_argument("--dedup", action="store_true", help="drop repeated scene points first")
    solver_flags(p)
    p.set_defaults(func=cmd_similarity)

    p = sub.add_parser("affine", help="search a scene for an affine image of a pattern")
    p.add_argument("pattern")
    p.add_argument("scene")
    p.add_argument("--dedup", action="store_true", help="drop repeated scene points first")
    solver_flags(p)
    p.set_defaults(func=cmd_affine)

    p = sub.add_parser("ksum", help="solve a k-SUM or k-LDT instance file")
    p.add_argument("instance")
    solver_flags(p)
    p.set_defaults(func=cmd_ksum)

    p = sub.add_parser("bench", help="operation-count benchmarks (CSV)")
    p.add_argument("suite", choices=("3sum", "mitm", "pipeline"))
    p.add_argument("--sizes", help="comma separated n values")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--epsilon", type=float, default=None,
                   help="run 3sum on floats with this zero tolerance")
    p.add_argument("--out")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("gen", help="generate instances")
    p.add_argument("kind", choices=("lattice", "random", "planted-similarity",
                                    "planted-affine", "ksum"))
    p.add_argument("--d", type=int, default=2)
    p.add_argument("--m", type=int, default=3, help="lattice side")
    p.add_argument("--n", type=int, default=20)
    p.add_argument("--k", type=int, default=3)
    p.add_argument("--range", type=int, nargs=2, default=(-1000, 1000), metavar=("LO", "HI"))
    p.add_argument("--mirrored", action="store_true")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("selftest", help="reduced-scale soundness, oracle and Las Vegas checks")
    p.add_argument("--scale", type=float, default=0.1)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_selftest)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (PatmatchError, ValueError, OSError) as exc:
        print(f"patmatch: error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
