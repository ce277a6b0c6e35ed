import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import SAMPLE_SUBSETS, S, abstract_poset
from oracles import brute_force_stable, latin_instance
from supermatch.instance import generate_instance
from supermatch.matching import Matching, blocking_pairs, distance
from supermatch.rotations import (
    ClosedSubset,
    NotClosedError,
    Rotation,
    RotationNotExposed,
    UnstableMatchingError,
    closed_subset_of_matching,
    eliminate,
    enumerate_closed_subsets,
    enumerate_rotations,
    fixed_pairs,
    matching_of_closed_subset,
    rotation_poset,
)

# rotations as read off the pair/rotation constraints of the size-7 CP model
SAMPLE_ROTATIONS = [
    ((0, 5), (6, 2)),
    ((1, 4), (6, 5), (5, 0)),
    ((0, 2), (5, 4)),
    ((0, 4), (4, 1)),
    ((6, 0), (2, 6)),
    ((1, 5), (3, 3)),
]
# x_{i,j} <-> s_p & ~s_e, one entry per stable pair: (pair, producing rotation, eliminating rotation)
SAMPLE_PAIR_RULES = [
    ((0, 5), None, 0), ((0, 2), 0, 2), ((0, 4), 2, 3), ((0, 1), 3, None),
    ((1, 4), None, 1), ((1, 5), 1, 5), ((1, 3), 5, None),
    ((2, 6), None, 4), ((2, 0), 4, None),
    ((3, 3), None, 5), ((3, 5), 5, None),
    ((4, 1), None, 3), ((4, 4), 3, None),
    ((5, 0), None, 1), ((5, 4), 1, 2), ((5, 2), 2, None),
    ((6, 2), None, 0), ((6, 5), 0, 1), ((6, 0), 1, 4), ((6, 6), 4, None),
]
M5 = Matching.from_men([4, 5, 6, 3, 1, 2, 0])


def _same_cycle(a, b):
    return len(a) == len(b) and any(tuple(a[k:] + a[:k]) == tuple(b) for k in range(len(a)))


def test_sample_rotations(poset7):
    assert poset7.size == 6
    for rho, expected in zip(poset7.rotations, SAMPLE_ROTATIONS):
        assert _same_cycle(list(rho.pairs), list(expected))


def test_sample_produce_eliminate(poset7):
    for pair, p, e in SAMPLE_PAIR_RULES:
        assert poset7.produce.get(pair) == p, pair
        assert poset7.eliminate.get(pair) == e, pair
    assert len(poset7.produce) == 13 and len(poset7.eliminate) == 13


def test_sample_edges(poset7):
    assert sorted(poset7.edges()) == [(0, 1), (1, 2), (1, 4), (2, 3), (4, 5)]
    assert set(poset7.direct_preds[3]) == {2}
    assert set(ClosedSubset(poset7.trans_preds[5])) == {0, 1, 4}
    assert set(ClosedSubset(poset7.trans_succs[1])) == {2, 3, 4, 5}


def test_eliminate_rho0(poset7):
    m1 = eliminate(poset7.m0, poset7.rotations[0])
    assert (0, 2) in m1 and (6, 5) in m1
    assert distance(m1, poset7.m0) == 2


def test_eliminate_not_exposed(poset7):
    with pytest.raises(RotationNotExposed):
        eliminate(poset7.m0, poset7.rotations[1])


def test_matching_of_closed_subset(poset7):
    assert matching_of_closed_subset(poset7, S(5)) == M5
    assert matching_of_closed_subset(poset7, ClosedSubset()) == poset7.m0
    assert matching_of_closed_subset(poset7, ClosedSubset.of(range(6))) == poset7.mz
    with pytest.raises(NotClosedError):
        matching_of_closed_subset(poset7, ClosedSubset.of([2]))


def test_closed_subset_of_matching(poset7):
    assert closed_subset_of_matching(poset7, M5) == S(5)
    assert closed_subset_of_matching(poset7, poset7.m0) == ClosedSubset()
    with pytest.raises(UnstableMatchingError):
        closed_subset_of_matching(poset7, Matching.from_men(range(7)))


def test_round_trip_all_sample_subsets(poset7):
    for k in range(11):
        assert closed_subset_of_matching(poset7, matching_of_closed_subset(poset7, S(k))) == S(k)


def test_enumerate_sample(poset7):
    ideals = list(enumerate_closed_subsets(poset7))
    assert len(ideals) == 11
    assert set(ideals) == {S(k) for k in range(11)}


def test_fixed_pairs(poset7, unique_instance):
    assert fixed_pairs(poset7.m0, poset7.mz) == set()
    enum = enumerate_rotations(unique_instance)
    assert enum.rotations == [] and enum.m0 == enum.mz
    assert fixed_pairs(enum.m0, enum.mz) == set(enum.m0.pairs())


def test_empty_poset(unique_instance):
    poset = rotation_poset(unique_instance)
    assert poset.size == 0
    assert list(enumerate_closed_subsets(poset)) == [ClosedSubset()]


@pytest.mark.parametrize("k", [0, 1, 5])
def test_chain_poset_ideals(k):
    poset = abstract_poset(k, [(i, i + 1) for i in range(k - 1)])
    assert len(list(enumerate_closed_subsets(poset))) == k + 1


def test_antichain_poset_ideals():
    poset = abstract_poset(4, [])
    assert len(set(enumerate_closed_subsets(poset))) == 16


def test_closure_operations(poset7):
    assert poset7.add(S(1), 4) == S(3)
    assert poset7.remove(S(4), 0) == ClosedSubset()
    assert poset7.down_closure(5) == S(4)
    assert poset7.toggle(poset7.toggle(S(5), 4), 4) == S(5)


def test_rotation_str():
    assert str(Rotation(2, ((0, 1), (3, 4)))) == "ρ2: [(0,1), (3,4)]"


def _check_poset_against_brute_force(inst):
    poset = rotation_poset(inst)
    stable = brute_force_stable(inst)
    ideals = list(enumerate_closed_subsets(poset))
    assert len(ideals) == len(set(ideals))
    matchings = [matching_of_closed_subset(poset, s) for s in ideals]
    assert set(matchings) == set(stable)
    common = set.intersection(*(set(m.pairs()) for m in stable))
    assert fixed_pairs(poset.m0, poset.mz) == common
    assert poset.size <= inst.n * (inst.n - 1) // 2
    seen = set()
    for rho in poset.rotations:
        assert len(rho.pairs) >= 2
        assert len(set(rho.men)) == len(rho.men) and len(set(rho.women)) == len(rho.women)
        assert not seen & set(rho.pairs)
        seen |= set(rho.pairs)
    for s, m in zip(ideals, matchings):
        assert closed_subset_of_matching(poset, m) == s
    # subset order is dominance order
    for s, a in zip(ideals, matchings):
        for t, b in zip(ideals, matchings):
            if s.mask & ~t.mask == 0:
                assert all(inst.men_rank[i, a.partner_of_man[i]] <= inst.men_rank[i, b.partner_of_man[i]] for i in range(inst.n))


@settings(max_examples=60, deadline=None)
@given(n=st.integers(2, 8), seed=st.integers(0, 2**63))
def test_poset_matches_brute_force(n, seed):
    _check_poset_against_brute_force(generate_instance(n, seed))


@pytest.mark.parametrize("n", [2, 3, 4, 5, 6, 7, 8])
def test_poset_on_latin_instances(n):
    _check_poset_against_brute_force(latin_instance(n))


def test_elimination_orders_reach_mz():
    inst = generate_instance(40, 11)
    poset = rotation_poset(inst)
    m = poset.m0
    remaining = set(range(poset.size))
    while remaining:
        # highest exposed id first, a different order from discovery
        exposed = [r for r in sorted(remaining, reverse=True) if all(p not in remaining for p in poset.direct_preds[r])]
        r = exposed[0]
        m = eliminate(m, poset.rotations[r])
        assert blocking_pairs(inst, m) == []
        remaining.remove(r)
    assert m == poset.mz
