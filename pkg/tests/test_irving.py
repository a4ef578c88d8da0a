import random

import pytest
from hypothesis import given

import naive
from conftest import pref_dicts
from fixtures import C6, E2, EX1, NOSM, PATH3, m, ps
from roommates import NO_STABLE_MATCHING, NoStableMatchingError, find_stable_matching, is_stable
from roommates.irving import partition_matched, perfect_core, phase_one


class TestPhaseOne:
    def test_examples(self):
        assert set(phase_one(ps(EX1)).removed) == {(1, 2), (2, 3), (4, 5)}
        assert phase_one(ps(E2)).removed == ()
        assert phase_one(ps(C6)).removed == ()

    def test_order_must_be_permutation(self):
        with pytest.raises(ValueError):
            phase_one(ps(C6), order=[1, 2, 3])

    @given(pref_dicts(max_n=8))
    def test_preserves_stable_set(self, d):
        res = phase_one(ps(d))
        assert set(res.surviving.edges) == set(ps(d).edges) - set(res.removed)
        assert naive.stable_set(res.surviving.as_dict()) == naive.stable_set(d)

    @given(pref_dicts(max_n=9))
    def test_order_independent(self, d):
        P = ps(d)
        base = phase_one(P).surviving
        rng = random.Random(len(P.edges))
        for _ in range(5):
            order = list(P.agents)
            rng.shuffle(order)
            assert phase_one(P, order).surviving == base

    @given(pref_dicts(max_n=9))
    def test_first_last_duality(self, d):
        G = phase_one(ps(d)).surviving
        for u, v in G.edges:
            for a, b in ((u, v), (v, u)):
                assert (G.first(a) == b) == (G.last(b) == a)


class TestFindStable:
    def test_examples(self):
        assert find_stable_matching(ps(EX1)) == m(14, 25, 36)
        assert find_stable_matching(ps(NOSM)) is NO_STABLE_MATCHING
        assert find_stable_matching(ps(E2)) == m(12)

    def test_no_stable_matching_is_falsy(self):
        assert not find_stable_matching(ps(NOSM))

    @given(pref_dicts(max_n=9))
    def test_agrees_with_naive(self, d):
        M = find_stable_matching(ps(d))
        S = naive.stable_set(d)
        if M is NO_STABLE_MATCHING:
            assert not S
        else:
            assert is_stable(ps(d), M) and M in S


class TestPartitionAndCore:
    def test_partition_examples(self):
        p = partition_matched(ps(PATH3))
        assert p.v0 == {3} and p.v1 == {1, 2}
        assert partition_matched(ps(EX1)).v0 == frozenset()
        assert partition_matched(ps(E2)).v0 == frozenset()

    def test_partition_requires_stable_matching(self):
        with pytest.raises(NoStableMatchingError):
            partition_matched(ps(NOSM))

    def test_core_examples(self):
        core = perfect_core(ps(PATH3))
        assert core.agents == (1, 2) and core.edges == ((1, 2),)
        assert perfect_core(ps(EX1)) == ps(EX1)
        assert perfect_core(ps(E2)) == ps(E2)

    def test_core_requires_stable_matching(self):
        with pytest.raises(NoStableMatchingError):
            perfect_core(ps(NOSM))

    @given(pref_dicts(max_n=9))
    def test_core_preserves_stable_matchings_and_makes_them_perfect(self, d):
        S = naive.stable_set(d)
        if not S:
            return
        core = perfect_core(ps(d))
        core_d = core.as_dict()
        T = naive.stable_set(core_d)
        perfect = {M for M in T if 2 * len(M) == len(core)}
        assert perfect == T == S
