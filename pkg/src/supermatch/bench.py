"""Batch instance generation, multi-seed runs, and normalised scores."""
from __future__ import annotations

import csv
import json
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from fractions import Fraction
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np

from ._kernels import mask_to_array, robustness_b
from .instance import Instance, generate_instance, load_instance, save_instance
from .rotations import rotation_poset
from .solvers import DEFAULT_IDEAL_BUDGET, IdealBudgetExceeded, SolverConfig, exact_most_robust, solve

log = logging.getLogger(__name__)

InstanceSpec = Union[str, Path, Tuple[str, Instance]]

RUN_COLUMNS = ["instance", "method", "seed", "best_b", "elapsed_ms", "termination"]
SCORE_COLUMNS = ["instance", "method", "score"]


@dataclass
class BenchRun:
    instance: str
    method: str
    seed: int
    best_b: Optional[int]
    elapsed: float
    termination: Optional[str]
    trace: List[Tuple[float, int]] = field(default_factory=list)
    error: Optional[str] = None

    @property
    def time_to_best(self) -> Optional[float]:
        return self.trace[-1][0] if self.trace else None


@dataclass(frozen=True, order=True)
class ScoreRow:
    instance: str
    method: str
    score: float


@dataclass
class BenchResult:
    runs: List[BenchRun]
    scores: List[ScoreRow]
    bounds: Dict[str, Tuple[int, int]]


def score(h: Optional[int], lb: int, ub: int) -> Fraction:
    """(ub - h + 1) / (ub - lb + 1); 0 when no solution was found."""
    if lb > ub:
        raise ValueError(f"lb={lb} exceeds ub={ub}")
    if h is None:
        return Fraction(0)
    if not lb <= h <= ub:
        raise ValueError(f"h={h} outside [{lb}, {ub}]")
    return Fraction(ub - h + 1, ub - lb + 1)


def _instance_id(spec: InstanceSpec) -> str:
    if isinstance(spec, tuple):
        return spec[0]
    return str(spec)


def _run_instance(job) -> Tuple[List[BenchRun], Optional[int]]:
    spec, methods, seeds, config, ideal_budget, exact_bounds = job
    name = _instance_id(spec)
    try:
        inst = spec[1] if isinstance(spec, tuple) else load_instance(spec)
        poset = rotation_poset(inst)
    except (OSError, ValueError) as exc:
        log.warning("failed to load %s: %s", name, exc)
        return [BenchRun(name, m, s, None, 0.0, None, error=str(exc)) for m in methods for s in seeds], None
    # keep kernel-table construction and JIT loading out of the first run's clock
    robustness_b(poset.kernel_tables, mask_to_array(0, poset.size))

    runs = []
    for method in methods:
        for seed in seeds:
            try:
                if method == "exact":
                    out = exact_most_robust(poset, ideal_budget=ideal_budget)
                else:
                    out = solve(poset, method, replace(config, seed=seed))
            except IdealBudgetExceeded as exc:
                runs.append(BenchRun(name, method, seed, None, 0.0, None, error=str(exc)))
                continue
            runs.append(
                BenchRun(name, method, seed, out.best_b, out.elapsed, out.termination.value, list(out.trace))
            )
    exact_b = None
    if exact_bounds and "exact" not in methods:
        try:
            exact_b = exact_most_robust(poset, ideal_budget=ideal_budget).best_b
        except IdealBudgetExceeded:
            pass
    return runs, exact_b


def run_bench(
    instances: Sequence[InstanceSpec],
    methods: Sequence[str],
    seeds: Sequence[int],
    config: SolverConfig = SolverConfig(),
    *,
    workers: int = 1,
    ideal_budget: int = DEFAULT_IDEAL_BUDGET,
    exact_bounds: bool = False,
) -> BenchResult:
    """Run every (instance, method, seed) cell and score the best run per (instance, method).

    Per-instance bounds are the min/max best_b over all runs of that
    instance; with ``exact_bounds`` the exact optimum (when enumerable) also
    enters the lower bound.
    """
    if not instances or not methods or not seeds:
        raise ValueError("instances, methods and seeds must be non-empty")
    jobs = [(spec, list(methods), list(seeds), config, ideal_budget, exact_bounds) for spec in instances]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_run_instance, jobs))
    else:
        results = [_run_instance(job) for job in jobs]

    runs: List[BenchRun] = []
    scores: List[ScoreRow] = []
    bounds: Dict[str, Tuple[int, int]] = {}
    for spec, (inst_runs, exact_b) in zip(instances, results):
        runs.extend(inst_runs)
        name = _instance_id(spec)
        found = [r.best_b for r in inst_runs if r.best_b is not None]
        if exact_b is not None:
            found.append(exact_b)
        for method in methods:
            own = [r.best_b for r in inst_runs if r.method == method and r.best_b is not None]
            if not found:
                scores.append(ScoreRow(name, method, 0.0))
                continue
            lb, ub = min(found), max(found)
            bounds[name] = (lb, ub)
            scores.append(ScoreRow(name, method, float(score(min(own) if own else None, lb, ub))))
    runs.sort(key=lambda r: (r.instance, r.method, r.seed))
    scores.sort()
    return BenchResult(runs, scores, bounds)


def write_runs_csv(runs: Iterable[BenchRun], path: Union[str, Path]) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(RUN_COLUMNS)
        for r in runs:
            elapsed_ms = "" if r.best_b is None else f"{r.elapsed * 1000:.3f}"
            w.writerow([r.instance, r.method, r.seed, "" if r.best_b is None else r.best_b, elapsed_ms, r.termination or "error"])


def write_scores_csv(scores: Iterable[ScoreRow], path: Union[str, Path]) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(SCORE_COLUMNS)
        for s in scores:
            w.writerow([s.instance, s.method, repr(s.score)])


def read_scores_csv(path: Union[str, Path]) -> List[ScoreRow]:
    with open(path, newline="") as fh:
        return [ScoreRow(row["instance"], row["method"], float(row["score"])) for row in csv.DictReader(fh)]


def write_traces_jsonl(runs: Iterable[BenchRun], path: Union[str, Path]) -> None:
    with open(path, "w") as fh:
        for r in runs:
            rec = {
                "instance": r.instance,
                "method": r.method,
                "seed": r.seed,
                "trace": [[round(t * 1000, 3), b] for t, b in r.trace],
            }
            fh.write(json.dumps(rec) + "\n")


def gen_batch(sizes: Sequence[int], count: int, seed: int, out_dir: Union[str, Path]) -> List[Path]:
    """Write ``count`` random instances per size as ``sm_n{n}_i{index}.txt``."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = []
    for n in sizes:
        for index in range(count):
            inst_seed = int(np.random.SeedSequence([int(seed) & (2**64 - 1), n, index]).generate_state(1, np.uint64)[0])
            path = out / f"sm_n{n}_i{index}.txt"
            save_instance(generate_instance(n, inst_seed), path)
            paths.append(path)
    return paths
