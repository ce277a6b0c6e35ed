"""Rotations, the rotation poset, and the closed-subset <-> stable matching bijection.

Closed subsets are stored as Python ``int`` bitmasks over rotation ids, so
closure operations (add a rotation with its predecessors, drop one with its
successors) are single bitwise expressions.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Dict, Iterable, Iterator, List, NamedTuple, Optional, Sequence, Set, Tuple

import numpy as np

from .instance import Instance
from .matching import Matching, Pair, blocking_pairs, man_optimal, woman_optimal


class RotationNotExposed(ValueError):
    pass


class NotClosedError(ValueError):
    pass


class UnstableMatchingError(ValueError):
    pass


def iter_bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


@dataclass(frozen=True)
class Rotation:
    """Cyclic list of pairs; eliminating it moves man ``i_c`` to the woman of ``i_{c+1}``."""

    id: int
    pairs: Tuple[Pair, ...]

    @property
    def men(self) -> Tuple[int, ...]:
        return tuple(m for m, _ in self.pairs)

    @property
    def women(self) -> Tuple[int, ...]:
        return tuple(w for _, w in self.pairs)

    def produced_pairs(self) -> List[Pair]:
        k = len(self.pairs)
        return [(self.pairs[c][0], self.pairs[(c + 1) % k][1]) for c in range(k)]

    def __str__(self) -> str:
        body = ", ".join(f"({m},{w})" for m, w in self.pairs)
        return f"ρ{self.id}: [{body}]"


@dataclass(frozen=True, order=True)
class ClosedSubset:
    """A set of rotation ids, hashed and compared by membership."""

    mask: int = 0

    @classmethod
    def of(cls, ids: Iterable[int]) -> "ClosedSubset":
        mask = 0
        for r in ids:
            mask |= 1 << int(r)
        return cls(mask)

    @property
    def members(self) -> Tuple[int, ...]:
        return tuple(iter_bits(self.mask))

    def __contains__(self, r: int) -> bool:
        return bool(self.mask >> r & 1)

    def __iter__(self) -> Iterator[int]:
        return iter_bits(self.mask)

    def __len__(self) -> int:
        return bin(self.mask).count("1")

    def __repr__(self) -> str:
        return f"ClosedSubset({set(self.members) or '{}'})"


def eliminate(m: Matching, rho: Rotation) -> Matching:
    """Return M/rho. Raises RotationNotExposed unless every pair of rho is in m."""
    for pair in rho.pairs:
        if pair not in m:
            raise RotationNotExposed(f"rotation {rho.id} is not exposed: {pair} not in matching")
    partners = list(m.partner_of_man)
    for man, w in rho.produced_pairs():
        partners[man] = w
    return Matching.from_men(partners)


class RotationEnumeration(NamedTuple):
    rotations: List[Rotation]
    produce: Dict[Pair, int]
    eliminate: Dict[Pair, int]
    m0: Matching
    mz: Matching


def enumerate_rotations(inst: Instance) -> RotationEnumeration:
    """Find every rotation by walking one maximal chain from M0 down to Mz.

    At each step the exposed rotation reached from the lowest-indexed man not
    yet at his Mz partner is eliminated, so ids follow elimination order and
    are therefore a topological order of the poset.
    """
    m0, mz = man_optimal(inst), woman_optimal(inst)
    n = inst.n
    prefs = inst.men_prefs.tolist()
    mrank = inst.men_rank.tolist()
    wrank = inst.women_rank.tolist()
    wife = list(m0.partner_of_man)
    husband = list(m0.partner_of_woman)
    target = mz.partner_of_man
    # lower bound on the list position of s_M(m); valid because women only improve
    look = [mrank[m][wife[m]] + 1 for m in range(n)]

    def s_of(m: int) -> int:
        k = look[m]
        row, me = prefs[m], m
        while k < n:
            w = row[k]
            if wrank[w][me] < wrank[w][husband[w]]:
                look[m] = k
                return w
            k += 1
        raise RuntimeError(f"man {m} has no next stable partner; matching is not stable")

    rotations: List[Rotation] = []
    produce: Dict[Pair, int] = {}
    elim: Dict[Pair, int] = {}
    lo = 0
    while True:
        while lo < n and wife[lo] == target[lo]:
            lo += 1
        if lo == n:
            break
        position: Dict[int, int] = {}
        walk: List[int] = []
        m = lo
        while m not in position:
            if wife[m] == target[m]:
                raise RuntimeError("rotation walk reached a man already at his woman-optimal partner")
            position[m] = len(walk)
            walk.append(m)
            m = husband[s_of(m)]
        cycle = walk[position[m]:]
        rid = len(rotations)
        pairs = tuple((x, wife[x]) for x in cycle)
        rho = Rotation(rid, pairs)
        rotations.append(rho)
        for pair in pairs:
            elim[pair] = rid
        for x, w in rho.produced_pairs():
            produce[(x, w)] = rid
            wife[x] = w
            husband[w] = x
            look[x] = mrank[x][w] + 1
    return RotationEnumeration(rotations, produce, elim, m0, mz)


@dataclass(frozen=True, eq=False)
class RotationPoset:
    """Rotations with their precedence DAG and the lookups the solvers need.

    ``trans_preds[r]`` / ``trans_succs[r]`` are bitmasks of all transitive
    predecessors / successors, excluding ``r`` itself. ``men_of[r]`` is a
    bitmask over men.
    """

    inst: Instance
    rotations: Tuple[Rotation, ...]
    direct_preds: Tuple[Tuple[int, ...], ...]
    direct_succs: Tuple[Tuple[int, ...], ...]
    trans_preds: Tuple[int, ...]
    trans_succs: Tuple[int, ...]
    produce: Dict[Pair, int]
    eliminate: Dict[Pair, int]
    men_of: Tuple[int, ...]
    rotations_of_man: Tuple[Tuple[int, ...], ...]
    m0: Matching
    mz: Matching

    @property
    def n(self) -> int:
        return self.inst.n

    @property
    def size(self) -> int:
        return len(self.rotations)

    def __len__(self) -> int:
        return len(self.rotations)

    @cached_property
    def _direct_pred_masks(self) -> Tuple[int, ...]:
        return tuple(sum(1 << p for p in ps) for ps in self.direct_preds)

    @cached_property
    def _direct_succ_masks(self) -> Tuple[int, ...]:
        return tuple(sum(1 << s for s in ss) for ss in self.direct_succs)

    def edges(self) -> List[Tuple[int, int]]:
        return [(p, r) for r, ps in enumerate(self.direct_preds) for p in ps]

    def is_closed(self, s: ClosedSubset) -> bool:
        mask = s.mask
        if mask >> self.size:
            return False
        return all(self.trans_preds[r] & ~mask == 0 for r in iter_bits(mask))

    def down_closure(self, r: int) -> ClosedSubset:
        """``{r}`` together with all of its predecessors."""
        return ClosedSubset(self.trans_preds[r] | 1 << r)

    def add(self, s: ClosedSubset, r: int) -> ClosedSubset:
        """Add ``r`` and whichever of its predecessors are missing."""
        return ClosedSubset(s.mask | 1 << r | self.trans_preds[r])

    def remove(self, s: ClosedSubset, r: int) -> ClosedSubset:
        """Remove ``r`` and its successors that lie in ``s``."""
        return ClosedSubset(s.mask & ~(1 << r | self.trans_succs[r]))

    def toggle(self, s: ClosedSubset, r: int) -> ClosedSubset:
        return self.remove(s, r) if r in s else self.add(s, r)

    def leaves(self, s: ClosedSubset) -> List[int]:
        """Members of ``s`` with no direct successor inside ``s``."""
        succ = self._direct_succ_masks
        return [r for r in iter_bits(s.mask) if succ[r] & s.mask == 0]

    def frontier(self, s: ClosedSubset) -> List[int]:
        """Non-members whose direct predecessors all lie in ``s``."""
        pred = self._direct_pred_masks
        mask = s.mask
        return [r for r in range(self.size) if not mask >> r & 1 and pred[r] & ~mask == 0]

    def men_count(self, mask: int) -> int:
        """Number of men involved in at least one rotation of ``mask``."""
        men = 0
        for r in iter_bits(mask):
            men |= self.men_of[r]
        return bin(men).count("1")

    @cached_property
    def kernel_tables(self):
        from ._kernels import KernelTables

        return KernelTables.from_poset(self)


def _precedence_edges(inst: Instance, enum: RotationEnumeration) -> List[Set[int]]:
    """Edges whose transitive closure is the precedence relation.

    For a man moving from w to w'' inside rotation r:
      * the rotation producing (m, w) precedes r;
      * for each w' strictly between w and w'' in m's list, the rotation that
        moves w' from a man she ranks below m to one she ranks above m
        precedes r.
    """
    prefs = inst.men_prefs.tolist()
    mrank = inst.men_rank.tolist()
    wrank = inst.women_rank.tolist()
    moves_of_woman: List[List[Tuple[int, int, int]]] = [[] for _ in range(inst.n)]
    for rho in enum.rotations:
        k = len(rho.pairs)
        for c, (man, w) in enumerate(rho.pairs):
            new_man = rho.pairs[(c - 1) % k][0]
            moves_of_woman[w].append((rho.id, man, new_man))

    preds: List[Set[int]] = [set() for _ in enum.rotations]
    for rho in enum.rotations:
        for (man, w), (_, w_new) in zip(rho.pairs, rho.produced_pairs()):
            p = enum.produce.get((man, w))
            if p is not None:
                preds[rho.id].add(p)
            for w_mid in prefs[man][mrank[man][w] + 1: mrank[man][w_new]]:
                my_rank = wrank[w_mid][man]
                for rid, old, new in moves_of_woman[w_mid]:
                    if wrank[w_mid][old] > my_rank > wrank[w_mid][new]:
                        preds[rho.id].add(rid)
                        break
    return preds


def order_tables(size: int, raw_preds: Sequence[Iterable[int]]):
    """Hasse diagram and transitive closures from any generating edge set.

    ``raw_preds[r]`` lists rotations known to precede ``r``; ids must already
    be a topological order. Returns ``(direct_preds, direct_succs,
    trans_preds, trans_succs)`` with the closures as bitmasks.
    """
    trans_preds = [0] * size
    for r in range(size):
        acc = 0
        for p in raw_preds[r]:
            if p >= r:
                raise ValueError("rotation ids are not a topological order")
            acc |= 1 << p | trans_preds[p]
        trans_preds[r] = acc
    direct_preds = []
    for r in range(size):
        implied = 0
        for p in iter_bits(trans_preds[r]):
            implied |= trans_preds[p]
        direct_preds.append(tuple(iter_bits(trans_preds[r] & ~implied)))
    succs: List[List[int]] = [[] for _ in range(size)]
    for r, ps in enumerate(direct_preds):
        for p in ps:
            succs[p].append(r)
    trans_succs = [0] * size
    for r in range(size):
        for p in iter_bits(trans_preds[r]):
            trans_succs[p] |= 1 << r
    return tuple(direct_preds), tuple(tuple(x) for x in succs), tuple(trans_preds), tuple(trans_succs)


def build_poset(enum: RotationEnumeration, inst: Instance) -> RotationPoset:
    """Assemble the poset: Hasse-diagram edges, transitive closures, lookups."""
    rotations = enum.rotations
    direct_preds, direct_succs, trans_preds, trans_succs = order_tables(
        len(rotations), _precedence_edges(inst, enum)
    )
    men_of = tuple(sum(1 << m for m in rho.men) for rho in rotations)
    by_man: List[List[int]] = [[] for _ in range(inst.n)]
    for rho in rotations:
        for m in rho.men:
            by_man[m].append(rho.id)
    return RotationPoset(
        inst=inst,
        rotations=tuple(rotations),
        direct_preds=direct_preds,
        direct_succs=direct_succs,
        trans_preds=trans_preds,
        trans_succs=trans_succs,
        produce=dict(enum.produce),
        eliminate=dict(enum.eliminate),
        men_of=men_of,
        rotations_of_man=tuple(tuple(x) for x in by_man),
        m0=enum.m0,
        mz=enum.mz,
    )


def rotation_poset(inst: Instance) -> RotationPoset:
    return build_poset(enumerate_rotations(inst), inst)


def matching_of_closed_subset(
    poset: RotationPoset, s: ClosedSubset, m0: Optional[Matching] = None
) -> Matching:
    """Eliminate the rotations of ``s`` from M0 in id (topological) order."""
    if not poset.is_closed(s):
        raise NotClosedError(f"{s!r} is not closed under predecessors")
    m = poset.m0 if m0 is None else m0
    for r in iter_bits(s.mask):
        m = eliminate(m, poset.rotations[r])
    return m


def closed_subset_of_matching(poset: RotationPoset, m: Matching) -> ClosedSubset:
    """Inverse of :func:`matching_of_closed_subset` for a stable matching."""
    if m.n != poset.n or blocking_pairs(poset.inst, m):
        raise UnstableMatchingError("matching is not stable for this instance")
    mask = 0
    for pair in m.pairs():
        r = poset.produce.get(pair)
        if r is not None:
            mask |= 1 << r | poset.trans_preds[r]
    return ClosedSubset(mask)


def fixed_pairs(m0: Matching, mz: Matching) -> Set[Pair]:
    """Pairs present in every stable matching: those shared by M0 and Mz."""
    return {(m, w) for m, w in m0.pairs() if mz.partner_of_man[m] == w}


def enumerate_closed_subsets(poset: RotationPoset) -> Iterator[ClosedSubset]:
    """Yield every ideal of the poset exactly once, starting with the empty set.

    Rotations are decided in id order (a topological order): a rotation with
    an excluded predecessor is skipped, otherwise both branches are explored.
    Every branch ends in an ideal, so the cost per ideal is O(|V|).
    """
    size = poset.size
    preds = poset.trans_preds
    stack = [(0, 0)]
    while stack:
        k, mask = stack.pop()
        while k < size and preds[k] & ~mask:
            k += 1
        if k == size:
            yield ClosedSubset(mask)
            continue
        stack.append((k + 1, mask | 1 << k))
        stack.append((k + 1, mask))
