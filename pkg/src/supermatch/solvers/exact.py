from __future__ import annotations

from ..rotations import RotationPoset, enumerate_closed_subsets
from .common import Clock, Evaluator, SolveOutcome, Termination, make_outcome

DEFAULT_IDEAL_BUDGET = 1_000_000


class IdealBudgetExceeded(RuntimeError):
    pass


def exact_most_robust(
    poset: RotationPoset, ideal_budget: int = DEFAULT_IDEAL_BUDGET, backend=None
) -> SolveOutcome:
    """Evaluate every stable matching (every ideal) and return a minimum-b one.

    Ties keep the first ideal in enumeration order. Raises
    IdealBudgetExceeded once more than ``ideal_budget`` ideals are seen.
    """
    clock = Clock(float("inf"))
    evaluate = Evaluator(poset, backend=backend, memoize=False)
    best = best_b = None
    trace = []
    count = 0
    for s in enumerate_closed_subsets(poset):
        count += 1
        if count > ideal_budget:
            raise IdealBudgetExceeded(f"more than {ideal_budget} stable matchings")
        b = evaluate(s)
        if best_b is None or b < best_b:
            best, best_b = s, b
            trace.append((clock.elapsed(), b))
    return make_outcome(poset, best, best_b, count, clock, evaluate, Termination.EXHAUSTED, trace)
