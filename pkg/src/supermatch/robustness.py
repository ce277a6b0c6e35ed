"""Closest repairs after a single couple breaks up, and the (1,b) robustness value.

For a stable matching with closed subset S and a non-fixed man i with
partner j, the closest stable matching avoiding (i, j) is reached either by
dropping the rotation that produced (i, j) together with its successors in
S (the dominating repair), or by adding the rotation that eliminates (i, j)
together with its missing predecessors (the dominated repair). The repair
cost of i is the smaller men-count minus one; b is the worst cost.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional

from .matching import Matching
from .rotations import ClosedSubset, RotationPoset, closed_subset_of_matching


class FixedManError(ValueError):
    pass


@dataclass(frozen=True)
class RepairResult:
    man: int
    s_up: Optional[ClosedSubset]
    s_down: Optional[ClosedSubset]
    d_up: Optional[int]
    d_down: Optional[int]
    b_i: int


@dataclass(frozen=True)
class RobustnessReport:
    matching: Matching
    subset: ClosedSubset
    per_man: List[RepairResult]
    b: int

    def format_table(self) -> str:
        def cell(x):
            return "inf" if x is None else str(x)

        lines = ["man  d_up  d_down  b_i"]
        for r in self.per_man:
            lines.append(f"{r.man:>3}  {cell(r.d_up):>4}  {cell(r.d_down):>6}  {r.b_i:>3}")
        lines.append(f"b = {self.b}")
        return "\n".join(lines)


def repair_up(poset: RotationPoset, s: ClosedSubset, man: int, m: Matching) -> Optional[ClosedSubset]:
    """S minus the rotation producing (man, M(man)) and its successors in S.

    ``None`` when the pair is already in M0, so no dominating repair exists.
    """
    r = poset.produce.get((man, m.partner_of_man[man]))
    if r is None:
        return None
    return poset.remove(s, r)


def repair_down(poset: RotationPoset, s: ClosedSubset, man: int, m: Matching) -> Optional[ClosedSubset]:
    """S plus the rotation eliminating (man, M(man)) and its missing predecessors.

    ``None`` when the pair is in Mz.
    """
    r = poset.eliminate.get((man, m.partner_of_man[man]))
    if r is None:
        return None
    return poset.add(s, r)


def is_fixed_man(poset: RotationPoset, man: int) -> bool:
    return poset.m0.partner_of_man[man] == poset.mz.partner_of_man[man]


def man_repair(poset: RotationPoset, s: ClosedSubset, man: int, m: Matching) -> RepairResult:
    if is_fixed_man(poset, man):
        raise FixedManError(f"man {man} is fixed; his pair is in every stable matching")
    up = repair_up(poset, s, man, m)
    down = repair_down(poset, s, man, m)
    d_up = None if up is None else poset.men_count(s.mask & ~up.mask)
    d_down = None if down is None else poset.men_count(down.mask & ~s.mask)
    b_i = min(d for d in (d_up, d_down) if d is not None) - 1
    return RepairResult(man, up, down, d_up, d_down, b_i)


def robustness(poset: RotationPoset, m: Matching) -> RobustnessReport:
    """Per-man repair costs over the non-fixed men and the overall value b.

    Raises UnstableMatchingError when ``m`` is not stable.
    """
    s = closed_subset_of_matching(poset, m)
    return robustness_of_subset(poset, s, m)


def robustness_of_subset(
    poset: RotationPoset, s: ClosedSubset, m: Optional[Matching] = None
) -> RobustnessReport:
    if m is None:
        from .rotations import matching_of_closed_subset

        m = matching_of_closed_subset(poset, s)
    per_man = [man_repair(poset, s, i, m) for i in range(poset.n) if not is_fixed_man(poset, i)]
    b = max((r.b_i for r in per_man), default=0)
    return RobustnessReport(m, s, per_man, b)


def is_one_b_supermatch(poset: RotationPoset, m: Matching, b: int) -> bool:
    """True iff every single non-fixed break-up can be repaired moving at most b other men."""
    if b < 0:
        raise ValueError("b must be non-negative")
    s = closed_subset_of_matching(poset, m)
    limit = b + 1
    for i in range(poset.n):
        if is_fixed_man(poset, i):
            continue
        up = repair_up(poset, s, i, m)
        if up is not None and poset.men_count(s.mask & ~up.mask) <= limit:
            continue
        down = repair_down(poset, s, i, m)
        if down is not None and poset.men_count(down.mask & ~s.mask) <= limit:
            continue
        return False
    return True
