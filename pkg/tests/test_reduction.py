import itertools
import random

import pytest
from hypothesis import given

import naive
from conftest import pref_dicts
from fixtures import C6, E2, EX1, NON_REDUCIBLE, NOSM, PATH3, ps
from roommates import EdgeInEM, NotPerfectCore, perfect_core, phase_one
from roommates.oracle import enumerate_stable_matchings
from roommates.reduction import (
    compute_em,
    edge_in_some_stable,
    forced_surgery,
    has_perfect_stable_matching,
    is_bipartite_reducible,
    is_valid_removal_sequence,
    reduce_to_h,
    removal_preserves,
    two_coloring,
)
from roommates.generators import random_perfect_core


def core_of(d):
    if not naive.stable_set(d):
        return None
    core = perfect_core(ps(d))
    return core if core.edges else None


class TestEM:
    def test_edge_examples(self):
        assert edge_in_some_stable(ps(EX1), (1, 4))
        assert not edge_in_some_stable(ps(EX1), (1, 2))
        assert edge_in_some_stable(ps(C6), (1, 2))

    def test_compute_examples(self):
        assert compute_em(ps(EX1)).in_em == {(1, 4), (2, 5), (3, 6)}
        assert compute_em(ps(C6)).in_em == set(ps(C6).edges)
        assert compute_em(ps(E2)).in_em == {(1, 2)}

    def test_requires_perfect_core(self):
        with pytest.raises(NotPerfectCore):
            compute_em(ps(PATH3))
        with pytest.raises(NotPerfectCore):
            compute_em(ps(NOSM))

    @given(pref_dicts(max_n=9))
    def test_equals_oracle_union(self, d):
        core = core_of(d)
        if core is None:
            return
        em = compute_em(core)
        union = {e for M in naive.stable_set(core.as_dict()) for e in M}
        assert em.in_em == union
        assert em.in_em | em.out_em == set(core.edges) and not em.in_em & em.out_em

    @given(pref_dicts(max_n=8))
    def test_forced_surgery_matches_oracle_for_pairs(self, d):
        core = core_of(d)
        if core is None:
            return
        S = naive.stable_set(core.as_dict())
        es = core.edges
        for f1, f2 in itertools.combinations(es, 2):
            if set(f1) & set(f2):
                continue
            res = forced_surgery(core, [f1, f2])
            got = res is not None and has_perfect_stable_matching(res)
            assert got == any({f1, f2} <= M for M in S)


class TestReduce:
    def test_ex1(self):
        red = reduce_to_h(ps(EX1))
        assert red.h.edges == ((1, 4), (2, 5), (3, 6))
        assert is_valid_removal_sequence(ps(EX1), red.em, red.removal_log)
        published = [(1, 2), (2, 6), (3, 2), (4, 2), (5, 4), (6, 4), (1, 5), (3, 1), (5, 3)]
        assert is_valid_removal_sequence(ps(EX1), red.em, published)

    def test_invalid_sequence_rejected(self):
        em = compute_em(ps(EX1))
        assert not is_valid_removal_sequence(ps(EX1), em, [(1, 4)])  # stable edge
        assert not is_valid_removal_sequence(ps(EX1), em, [(1, 3)])  # nobody's worst

    def test_c6_and_e2(self):
        red = reduce_to_h(ps(C6))
        assert red.h == ps(C6) and red.removal_log == ()
        assert reduce_to_h(ps(E2)).h == ps(E2)

    @given(pref_dicts(max_n=9))
    def test_structure(self, d):
        core = core_of(d)
        if core is None:
            return
        red = reduce_to_h(core)
        H, em = red.h, red.em.in_em
        assert set(H.edges) == set(core.edges) - set(red.removal_log)
        assert em <= set(H.edges)
        assert naive.stable_set(H.as_dict()) == naive.stable_set(core.as_dict())
        gi = phase_one(core).surviving
        assert set(H.edges) <= set(gi.edges)
        assert phase_one(H).removed == ()
        for v in H.agents:
            f, l = H.first(v), H.last(v)
            assert (min(v, f), max(v, f)) in em and (min(v, l), max(v, l)) in em
            for u in H.prefs(v):
                assert (H.first(u) == v) == (H.last(v) == u)
                if (min(u, v), max(u, v)) not in em:
                    assert H.prefers(v, f, u) and H.prefers(v, u, l)
        for seed in range(5):
            assert reduce_to_h(core, red.em, random.Random(seed)).h == H

    @given(pref_dicts(max_n=8))
    def test_em_graph_first_last_duality(self, d):
        core = core_of(d)
        if core is None:
            return
        hbar = core.with_edges(compute_em(core).in_em)
        for u, v in hbar.edges:
            for a, b in ((u, v), (v, u)):
                assert (hbar.first(b) == a) == (hbar.last(a) == b)

    @given(pref_dicts(max_n=8))
    def test_worst_non_em_edge_is_removable(self, d):
        core = core_of(d)
        if core is None:
            return
        em = compute_em(core)
        S = naive.stable_set(core.as_dict())
        for e in em.out_em:
            u, v = e
            if core.last(u) == v or core.last(v) == u:
                assert naive.stable_set(core.without_edges([e]).as_dict()) == S


class TestRemovalPreserves:
    def test_examples(self):
        P = ps(EX1)
        for e in [(1, 2), (3, 5), (2, 6)]:
            assert removal_preserves(P, e)

    def test_rejects_em_edge(self):
        with pytest.raises(EdgeInEM):
            removal_preserves(ps(EX1), (1, 4))

    @given(pref_dicts(max_n=8))
    def test_matches_oracle(self, d):
        core = core_of(d)
        if core is None:
            return
        em = compute_em(core)
        S = naive.stable_set(core.as_dict())
        for e in em.out_em:
            same = naive.stable_set(core.without_edges([e]).as_dict()) == S
            assert removal_preserves(core, e, em) == same


class TestReducible:
    def test_examples(self):
        r = is_bipartite_reducible(ps(EX1))
        assert r and r.parts == ({1, 2, 3}, {4, 5, 6})
        r = is_bipartite_reducible(ps(C6))
        assert r and r.parts == ({1, 3, 5}, {2, 4, 6})

    @pytest.mark.parametrize("d", NON_REDUCIBLE)
    def test_frozen_non_reducible(self, d):
        P = ps(d)
        r = is_bipartite_reducible(P)
        assert not r and len(r.odd_cycle) % 2 == 1
        cyc = r.odd_cycle
        for i in range(len(cyc)):
            assert r.h.has_edge(cyc[i], cyc[(i + 1) % len(cyc)])

    @pytest.mark.parametrize("d", NON_REDUCIBLE)
    def test_no_bipartite_subgraph_keeps_stable_set(self, d):
        # any subgraph with the same stable set contains E_M; try every
        # bipartite superset of E_M inside E
        P = ps(d)
        S = set(enumerate_stable_matchings(P))
        em = compute_em(P)
        rest = sorted(em.out_em)
        for k in range(len(rest) + 1):
            for extra in itertools.combinations(rest, k):
                sub = P.with_edges(em.in_em | set(extra))
                if two_coloring(sub)[1] is None:
                    assert set(enumerate_stable_matchings(sub)) != S

    def test_random_corpus_partition_is_a_bipartition(self):
        rng = random.Random(11)
        for _ in range(60):
            P = random_perfect_core(rng, 10)
            r = is_bipartite_reducible(P)
            if r:
                a, b = r.parts
                assert a | b == set(P.agents) and not a & b
                assert all((u in a) != (v in a) for u, v in r.h.edges)
