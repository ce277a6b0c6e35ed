"""Perfect matchings, deferred acceptance, stability and distance."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, List, Sequence, Tuple

from .instance import Instance

Pair = Tuple[int, int]


@dataclass(frozen=True)
class Matching:
    """A perfect man-woman assignment; ``partner_of_woman`` is the inverse."""

    partner_of_man: Tuple[int, ...]
    partner_of_woman: Tuple[int, ...]

    @classmethod
    def from_men(cls, partners: Sequence[int]) -> "Matching":
        partners = tuple(int(w) for w in partners)
        n = len(partners)
        inverse = [-1] * n
        for m, w in enumerate(partners):
            if not 0 <= w < n or inverse[w] != -1:
                raise ValueError(f"not a perfect matching: {list(partners)}")
            inverse[w] = m
        return cls(partners, tuple(inverse))

    @classmethod
    def from_pairs(cls, pairs: Iterable[Pair]) -> "Matching":
        pairs = sorted(pairs)
        if [m for m, _ in pairs] != list(range(len(pairs))):
            raise ValueError(f"pairs do not cover every man exactly once: {pairs}")
        return cls.from_men([w for _, w in pairs])

    @property
    def n(self) -> int:
        return len(self.partner_of_man)

    def pairs(self) -> List[Pair]:
        return list(enumerate(self.partner_of_man))

    def __contains__(self, pair: Pair) -> bool:
        m, w = pair
        return 0 <= m < self.n and self.partner_of_man[m] == w

    def __str__(self) -> str:
        return " ".join(map(str, self.partner_of_man))


def parse_matching(text: str) -> Matching:
    """Parse ``n`` whitespace-separated woman indices, one per man."""
    try:
        return Matching.from_men([int(tok) for tok in text.split()])
    except ValueError as exc:
        raise ValueError(f"invalid matching {text!r}: {exc}") from None


def _deferred_acceptance(proposer_prefs, receiver_rank) -> List[int]:
    n = len(proposer_prefs)
    next_choice = [0] * n
    held_by = [-1] * n  # receiver -> proposer
    free = list(range(n - 1, -1, -1))
    while free:
        p = free.pop()
        r = proposer_prefs[p][next_choice[p]]
        next_choice[p] += 1
        current = held_by[r]
        if current == -1:
            held_by[r] = p
        elif receiver_rank[r][p] < receiver_rank[r][current]:
            held_by[r] = p
            free.append(current)
        else:
            free.append(p)
    partner = [-1] * n
    for r, p in enumerate(held_by):
        partner[p] = r
    return partner


def man_optimal(inst: Instance) -> Matching:
    """Man-proposing deferred acceptance: the man-optimal stable matching M0."""
    return Matching.from_men(_deferred_acceptance(inst.men_prefs.tolist(), inst.women_rank.tolist()))


def woman_optimal(inst: Instance) -> Matching:
    """Woman-proposing deferred acceptance: the woman-optimal stable matching Mz."""
    wife_of = _deferred_acceptance(inst.women_prefs.tolist(), inst.men_rank.tolist())
    husband = [-1] * inst.n
    for w, m in enumerate(wife_of):
        husband[m] = w
    return Matching.from_men(husband)


def blocking_pairs(inst: Instance, m: Matching) -> List[Pair]:
    """All pairs (i, j) where i prefers j to M(i) and j prefers i to M(j)."""
    if m.n != inst.n:
        raise ValueError(f"matching has size {m.n}, instance has n={inst.n}")
    men_rank = inst.men_rank
    women_rank = inst.women_rank
    out = []
    for i in range(inst.n):
        current = m.partner_of_man[i]
        for j in inst.men_prefs[i][: men_rank[i, current]].tolist():
            if women_rank[j, i] < women_rank[j, m.partner_of_woman[j]]:
                out.append((i, j))
    return out


def is_stable(inst: Instance, m: Matching) -> bool:
    return not blocking_pairs(inst, m)


def distance(m1: Matching, m2: Matching) -> int:
    """Number of men whose partners differ between the two matchings."""
    if m1.n != m2.n:
        raise ValueError("matchings have different sizes")
    return sum(a != b for a, b in zip(m1.partner_of_man, m2.partner_of_man))
