from .common import Evaluator, SolveOutcome, SolverConfig, Termination, random_closed_subset, rng_streams
from .exact import DEFAULT_IDEAL_BUDGET, IdealBudgetExceeded, exact_most_robust
from .genetic import (
    Individual,
    ga_crossover,
    ga_evaluate,
    ga_mutate,
    ga_refine,
    ga_select,
    genetic_algorithm,
)
from .local_search import local_search, ls_neighbors

METHODS = ("exact", "ls", "ga")


def solve(poset, method: str, config: SolverConfig = SolverConfig(), **kwargs) -> SolveOutcome:
    if method == "exact":
        return exact_most_robust(poset, **kwargs)
    if method == "ls":
        return local_search(poset, config, **kwargs)
    if method == "ga":
        return genetic_algorithm(poset, config, **kwargs)
    raise ValueError(f"unknown method {method!r}; expected one of {METHODS}")
