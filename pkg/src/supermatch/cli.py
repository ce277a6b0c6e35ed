"""Command-line interface: rotations, verify, solve, bench, gen."""
from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import bench as bench_mod
from ._kernels import BACKEND
from .instance import InstanceFormatError, load_instance
from .matching import parse_matching
from .robustness import robustness
from .rotations import UnstableMatchingError, rotation_poset
from .solvers import DEFAULT_IDEAL_BUDGET, METHODS, IdealBudgetExceeded, SolverConfig, solve

log = logging.getLogger("supermatch")


def _load_poset(path):
    try:
        return rotation_poset(load_instance(path))
    except (OSError, InstanceFormatError) as exc:
        raise SystemExit(f"error: cannot load {path}: {exc}")


def cmd_rotations(args) -> int:
    poset = _load_poset(args.instance)
    print(f"|V| = {poset.size}")
    for rho in poset.rotations:
        print(rho)
    for p, r in poset.edges():
        print(f"ρ{p} -> ρ{r}")
    return 0


def cmd_verify(args) -> int:
    poset = _load_poset(args.instance)
    try:
        m = parse_matching(args.matching)
        report = robustness(poset, m)
    except (ValueError, UnstableMatchingError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(report.format_table())
    if args.b is None:
        return 0
    ok = report.b <= args.b
    print(f"(1,{args.b})-supermatch: {'yes' if ok else 'no'}")
    return 0 if ok else 1


def _config(args) -> SolverConfig:
    return SolverConfig(
        time_limit=args.time_limit,
        cutoff=args.cutoff,
        restart_period=args.restart,
        population_size=args.pop,
        mutation_prob=args.mutation_prob,
        c0=args.c0,
        seed=args.seed,
    )


def cmd_solve(args) -> int:
    poset = _load_poset(args.instance)
    kwargs = {"ideal_budget": args.ideal_budget} if args.method == "exact" else {}
    try:
        out = solve(poset, args.method, _config(args), **kwargs)
    except IdealBudgetExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    result = {
        "instance": args.instance,
        "method": args.method,
        "seed": args.seed,
        "best_b": out.best_b,
        "matching": list(out.best_matching.partner_of_man),
        "closed_subset": list(out.best_subset.members),
        "iterations": out.iterations,
        "evaluations": out.evaluations,
        # wall-clock time breaks byte-for-byte reproducibility, so it is opt-in
        "elapsed_ms": round(out.elapsed * 1000, 3) if args.timing else None,
        "termination": out.termination.value,
    }
    text = json.dumps(result, indent=2) + "\n"
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    log.info("best b=%d in %.1f ms (%s)", out.best_b, out.elapsed * 1000, out.termination.value)
    return 0


def _instance_files(spec: str):
    p = Path(spec)
    if p.is_dir():
        return sorted(str(f) for f in p.glob("*.txt"))
    return [spec]


def cmd_bench(args) -> int:
    files = [f for spec in args.instances for f in _instance_files(spec)]
    if not files:
        raise SystemExit("error: no instance files found")
    methods = [m.strip() for m in args.methods.split(",") if m.strip()]
    for m in methods:
        if m not in METHODS:
            raise SystemExit(f"error: unknown method {m!r}")
    seeds = list(range(args.seed_base, args.seed_base + args.seeds))
    result = bench_mod.run_bench(
        files,
        methods,
        seeds,
        _config(args),
        workers=args.workers,
        ideal_budget=args.ideal_budget,
        exact_bounds=args.exact_bounds,
    )
    out = Path(args.out)
    bench_mod.write_runs_csv(result.runs, out)
    scores_path = Path(args.scores) if args.scores else out.with_name(out.stem + ".scores.csv")
    bench_mod.write_scores_csv(result.scores, scores_path)
    if args.traces:
        bench_mod.write_traces_jsonl(result.runs, args.traces)
    by_method = {}
    for row in result.scores:
        by_method.setdefault(row.method, []).append(row.score)
    for method, vals in by_method.items():
        print(f"{method}: mean score {sum(vals) / len(vals):.4f} over {len(vals)} instances")
    return 0


def cmd_gen(args) -> int:
    sizes = [int(x) for x in args.sizes.split(",")]
    for path in bench_mod.gen_batch(sizes, args.count, args.seed, args.out):
        print(path)
    return 0


def _add_solver_flags(p, time_limit: float):
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--time-limit", type=float, default=time_limit, help="seconds")
    p.add_argument("--cutoff", type=int, default=10_000, help="iterations without improvement")
    p.add_argument("--restart", type=int, default=50, help="local-search iterations per restart")
    p.add_argument("--pop", type=int, default=10, help="GA population size")
    p.add_argument("--mutation-prob", type=float, default=0.8)
    p.add_argument("--c0", type=float, default=0.5, help="GA fitness offset")
    p.add_argument("--ideal-budget", type=int, default=DEFAULT_IDEAL_BUDGET)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="supermatch", description="Robustness of stable matchings")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("rotations", help="list rotations and poset edges")
    p.add_argument("instance")
    p.set_defaults(func=cmd_rotations)

    p = sub.add_parser("verify", help="per-man repair costs and b of a matching")
    p.add_argument("instance")
    p.add_argument("--matching", required=True, help='partner of each man, e.g. "4 5 6 3 1 2 0"')
    p.add_argument("--b", type=int, default=None, help="exit 1 unless the matching is a (1,B)-supermatch")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("solve", help="find the most robust stable matching")
    p.add_argument("instance")
    p.add_argument("--method", choices=METHODS, default="ls")
    _add_solver_flags(p, 1200.0)
    p.add_argument("--out", default=None, help="result JSON path (default: stdout)")
    p.add_argument("--timing", action="store_true", help="record elapsed_ms in the result")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("bench", help="multi-seed, multi-method benchmark")
    p.add_argument("--instances", nargs="+", required=True, help="directories or instance files")
    p.add_argument("--methods", default="ls,ga")
    p.add_argument("--seeds", type=int, default=4, help="number of seeds")
    p.add_argument("--seed-base", type=int, default=0)
    _add_solver_flags(p, 60.0)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--exact-bounds", action="store_true", help="let the exact optimum tighten lb")
    p.add_argument("--out", required=True, help="per-run CSV")
    p.add_argument("--scores", default=None, help="score CSV (default: <out>.scores.csv)")
    p.add_argument("--traces", default=None, help="anytime traces as JSON lines")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("gen", help="generate a batch of random instances")
    p.add_argument("--sizes", required=True, help="comma-separated n values")
    p.add_argument("--count", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(func=cmd_gen)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    log.debug("kernel backend: %s", BACKEND)
    try:
        return args.func(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
