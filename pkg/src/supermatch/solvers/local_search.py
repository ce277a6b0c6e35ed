"""Iterated best-improvement local search over the rotation-poset neighbourhood."""
from __future__ import annotations

from typing import Callable, List, Optional, Tuple

from ..rotations import ClosedSubset, RotationPoset
from .common import (
    Clock,
    Evaluator,
    SolveOutcome,
    SolverConfig,
    Termination,
    make_outcome,
    random_closed_subset,
    rng_streams,
)

Observer = Callable[[str, ClosedSubset, int], None]


def ls_neighbors(poset: RotationPoset, s: ClosedSubset) -> List[ClosedSubset]:
    """Closed subsets one rotation away: drop a leaf of ``s`` or add a frontier rotation."""
    down = [ClosedSubset(s.mask & ~(1 << r)) for r in poset.leaves(s)]
    up = [ClosedSubset(s.mask | 1 << r) for r in poset.frontier(s)]
    return down + up


def _best(neighbors: List[ClosedSubset], evaluate: Evaluator) -> Tuple[Optional[ClosedSubset], int]:
    best, best_key = None, None
    for s in neighbors:
        key = (evaluate(s), s.members)
        if best_key is None or key < best_key:
            best, best_key = s, key
    return best, (best_key[0] if best_key else -1)


def local_search(
    poset: RotationPoset,
    config: SolverConfig = SolverConfig(),
    *,
    start: Optional[ClosedSubset] = None,
    backend: Optional[str] = None,
    observer: Optional[Observer] = None,
) -> SolveOutcome:
    """Descend to the best strictly improving neighbour, restarting from a random
    stable matching every ``restart_period`` iterations.

    The no-improvement counter is reset only when the global best improves;
    the run stops on the time limit, after ``cutoff`` iterations without
    improvement, or when b = 1 (no non-fixed man can be repaired cheaper).
    """
    rng = rng_streams(config.seed)["init"]
    clock = Clock(config.time_limit)
    evaluate = Evaluator(poset, backend)
    notify = observer or (lambda *_: None)

    current = start if start is not None else random_closed_subset(poset, rng)
    cur_b = evaluate(current)
    best, best_b = current, cur_b
    trace = [(clock.elapsed(), best_b)]
    notify("start", current, cur_b)
    iterations = 0

    def done(term):
        return make_outcome(poset, best, best_b, iterations, clock, evaluate, term, trace)

    if poset.size == 0:
        return done(Termination.EXHAUSTED)
    if best_b <= 1:
        return done(Termination.OPTIMAL_B_REACHED)

    cnt = 0
    period, cutoff = config.restart_period, config.cutoff
    while True:
        depth = 0
        while depth < period:
            if clock.expired():
                return done(Termination.TIME_LIMIT)
            cnt += 1
            depth += 1
            iterations += 1
            nb, nb_b = _best(ls_neighbors(poset, current), evaluate)
            if nb is not None and nb_b < cur_b:
                current, cur_b = nb, nb_b
                notify("move", current, cur_b)
                if cur_b < best_b:
                    best, best_b = current, cur_b
                    cnt = 0
                    trace.append((clock.elapsed(), best_b))
                    if best_b <= 1:
                        return done(Termination.OPTIMAL_B_REACHED)
            else:
                # local optimum: the rest of this descent would repeat the same step
                skip = min(period - depth, cutoff - cnt)
                cnt += skip
                depth += skip
                iterations += skip
            if cnt >= cutoff:
                return done(Termination.CUTOFF)
        if clock.expired():
            return done(Termination.TIME_LIMIT)
        current = random_closed_subset(poset, rng)
        cur_b = evaluate(current)
        notify("restart", current, cur_b)
        if cur_b < best_b:
            best, best_b = current, cur_b
            cnt = 0
            trace.append((clock.elapsed(), best_b))
            if best_b <= 1:
                return done(Termination.OPTIMAL_B_REACHED)
