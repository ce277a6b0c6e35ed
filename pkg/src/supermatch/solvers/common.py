from __future__ import annotations

import enum
import time
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np

from .._kernels import mask_to_array, robustness_b
from ..matching import Matching
from ..rotations import ClosedSubset, RotationPoset, matching_of_closed_subset

_SEED_MASK = (1 << 64) - 1


class Termination(str, enum.Enum):
    OPTIMAL_B_REACHED = "optimal_b_reached"
    CUTOFF = "cutoff"
    TIME_LIMIT = "time_limit"
    EXHAUSTED = "exhausted"


@dataclass(frozen=True)
class SolverConfig:
    time_limit: float = 1200.0
    cutoff: int = 10_000
    restart_period: int = 50
    population_size: int = 10
    mutation_prob: float = 0.8
    c0: float = 0.5
    seed: int = 0

    def __post_init__(self):
        if not self.time_limit > 0:
            raise ValueError("time_limit must be positive")
        if self.cutoff <= 0:
            raise ValueError("cutoff must be positive")
        if self.restart_period <= 0:
            raise ValueError("restart_period must be positive")
        if self.population_size < 2:
            raise ValueError("population_size must be at least 2")
        if not 0.0 <= self.mutation_prob <= 1.0:
            raise ValueError("mutation_prob must lie in [0, 1]")
        if not self.c0 > 0:
            raise ValueError("c0 must be positive")


@dataclass
class SolveOutcome:
    best_matching: Matching
    best_subset: ClosedSubset
    best_b: int
    iterations: int
    elapsed: float
    evaluations: int
    termination: Termination
    # (seconds since start, best b) at every improvement of the global best
    trace: List[Tuple[float, int]] = field(default_factory=list)

    @property
    def time_to_best(self) -> float:
        return self.trace[-1][0] if self.trace else 0.0


def rng_streams(seed: int, names=("init", "select", "crossover", "mutation")) -> Dict[str, np.random.Generator]:
    """Independent generators per purpose, all derived from one seed."""
    children = np.random.SeedSequence(int(seed) & _SEED_MASK).spawn(len(names))
    return {name: np.random.default_rng(ss) for name, ss in zip(names, children)}


def random_closed_subset(poset: RotationPoset, rng) -> ClosedSubset:
    """One uniformly drawn rotation plus all its predecessors (empty poset -> empty set)."""
    if poset.size == 0:
        return ClosedSubset()
    return poset.down_closure(int(rng.integers(poset.size)))


class Evaluator:
    """Memoised robustness values of closed subsets.

    ``evaluations`` counts kernel calls, i.e. distinct subsets evaluated.
    """

    def __init__(self, poset: RotationPoset, backend: Optional[str] = None, memoize: bool = True):
        self.poset = poset
        self.backend = backend
        self.memoize = memoize
        self._tables = poset.kernel_tables
        self._memo: Dict[int, int] = {}
        self.evaluations = 0

    def __call__(self, s: ClosedSubset) -> int:
        if self.memoize:
            b = self._memo.get(s.mask)
            if b is not None:
                return b
        self.evaluations += 1
        b = robustness_b(self._tables, mask_to_array(s.mask, self.poset.size), self.backend)
        if self.memoize:
            self._memo[s.mask] = b
        return b


class Clock:
    def __init__(self, limit: float):
        self.start = time.perf_counter()
        self.limit = limit

    def elapsed(self) -> float:
        return time.perf_counter() - self.start

    def expired(self) -> bool:
        return self.elapsed() >= self.limit


def make_outcome(poset, subset, b, iterations, clock, evaluator, termination, trace) -> SolveOutcome:
    return SolveOutcome(
        best_matching=matching_of_closed_subset(poset, subset),
        best_subset=subset,
        best_b=b,
        iterations=iterations,
        elapsed=clock.elapsed(),
        evaluations=evaluator.evaluations,
        termination=termination,
        trace=trace,
    )
