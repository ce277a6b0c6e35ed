"""Genetic algorithm over closed subsets with roulette-wheel selection."""
from __future__ import annotations

from typing import List, NamedTuple, Optional, Sequence, Tuple

import numpy as np

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


class Individual(NamedTuple):
    subset: ClosedSubset
    b: int


def ga_evaluate(b_values: Sequence[int], c0: float = 0.5) -> np.ndarray:
    """Normalised fitness: (max_b + c0 - b_i) / sum_j (max_b + c0 - b_j)."""
    b = np.asarray(b_values, dtype=float)
    if b.size == 0:
        raise ValueError("empty population")
    v = b.max() + c0 - b
    return v / v.sum()


def ga_select(fitness: Sequence[float], rng) -> int:
    """Roulette wheel: index i with probability fitness[i]."""
    r = rng.random()
    acc = 0.0
    for i, v in enumerate(fitness):
        if acc <= r < acc + v:
            return i
        acc += v
    # r fell past the rounded cumulative sum
    return len(fitness) - 1


def _draw_member(s: ClosedSubset, rng) -> int:
    members = s.members
    return members[int(rng.integers(len(members)))]


def ga_crossover(
    poset: RotationPoset, s1: ClosedSubset, s2: ClosedSubset, rng
) -> Tuple[ClosedSubset, ClosedSubset]:
    """Toggle a rotation drawn from each parent inside the other parent.

    An empty parent has nothing to draw, so the other child is a copy.
    """
    r1 = _draw_member(s1, rng) if s1.mask else None
    r2 = _draw_member(s2, rng) if s2.mask else None
    c2 = s2 if r1 is None else poset.toggle(s2, r1)
    c1 = s1 if r2 is None else poset.toggle(s1, r2)
    return c1, c2


def ga_mutate(poset: RotationPoset, s: ClosedSubset, rng) -> ClosedSubset:
    if poset.size == 0:
        return s
    return poset.toggle(s, int(rng.integers(poset.size)))


def ga_refine(population: Sequence[Individual], children: Sequence[Individual]) -> List[Individual]:
    """Append the children, then drop the two highest-b members (oldest first on ties)."""
    pop = list(population) + list(children)
    for _ in range(len(children)):
        worst = max(range(len(pop)), key=lambda i: (pop[i].b, -i))
        del pop[worst]
    return pop


def _fittest(pop: Sequence[Individual]) -> int:
    return min(range(len(pop)), key=lambda i: (pop[i].b, i))


def genetic_algorithm(
    poset: RotationPoset,
    config: SolverConfig = SolverConfig(),
    *,
    backend: Optional[str] = None,
    observer=None,
) -> SolveOutcome:
    """Evolve a population of closed subsets until b = 1, the cutoff, or the time limit.

    Each iteration selects two parents (crossover + refinement when they
    differ), then selects a mutation candidate that is mutated with
    probability ``mutation_prob`` unless it equals the current fittest.
    """
    streams = rng_streams(config.seed)
    clock = Clock(config.time_limit)
    evaluate = Evaluator(poset, backend)

    def individual(s: ClosedSubset) -> Individual:
        return Individual(s, evaluate(s))

    pop = [individual(random_closed_subset(poset, streams["init"])) for _ in range(config.population_size)]
    best = pop[_fittest(pop)]
    trace = [(clock.elapsed(), best.b)]
    iterations = 0

    def done(term):
        return make_outcome(poset, best.subset, best.b, iterations, clock, evaluate, term, trace)

    if poset.size == 0:
        return done(Termination.EXHAUSTED)
    if best.b <= 1:
        return done(Termination.OPTIMAL_B_REACHED)

    select, cross, mutate = streams["select"], streams["crossover"], streams["mutation"]
    cnt = 0
    while True:
        if clock.expired():
            return done(Termination.TIME_LIMIT)
        iterations += 1
        fitness = ga_evaluate([ind.b for ind in pop], config.c0)
        i1, i2 = ga_select(fitness, select), ga_select(fitness, select)
        if pop[i1].subset != pop[i2].subset:
            c1, c2 = ga_crossover(poset, pop[i1].subset, pop[i2].subset, cross)
            pop = ga_refine(pop, [individual(c1), individual(c2)])
            fitness = ga_evaluate([ind.b for ind in pop], config.c0)
        fit = _fittest(pop)
        im = ga_select(fitness, select)
        if pop[im].subset != pop[fit].subset and mutate.random() < config.mutation_prob:
            pop[im] = individual(ga_mutate(poset, pop[im].subset, mutate))
        if observer is not None:
            observer(iterations, pop)

        leader = pop[_fittest(pop)]
        if leader.b < best.b:
            best = leader
            cnt = 0
            trace.append((clock.elapsed(), best.b))
            if best.b <= 1:
                return done(Termination.OPTIMAL_B_REACHED)
        else:
            cnt += 1
            if cnt >= config.cutoff:
                return done(Termination.CUTOFF)
