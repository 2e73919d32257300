"""Core structures: reachability, condensation, entering counts, budgets,
and the canonical enumeration orders everything downstream relies on."""
import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from arbopack import (
    Budget,
    CapExceededError,
    MixedHypergraph,
    RootMultiset,
    Subpartition,
    entering_count,
    in_degree,
    induced_subgraph,
    orient,
    orient_all,
    reach_from,
    reach_to,
    rho,
    scc_condense,
    set_partitions,
    subpartitions,
    subsets,
    trim,
)

from conftest import arc, mh


def small_graphs():
    def parts(n):
        arcs = st.lists(
            st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)).filter(
                lambda p: p[0] != p[1]
            ),
            max_size=6,
        )
        if n < 2:
            edges = st.just([])
        else:
            edges = st.lists(
                st.sets(st.integers(0, n - 1), min_size=2, max_size=n),
                max_size=3,
            )
        return st.tuples(st.just(n), arcs, edges)

    return st.integers(1, 4).flatmap(parts)


def build(spec):
    n, arcs, edges = spec
    return mh(n, edges, [(frozenset({u}), v) for u, v in arcs])


class TestConstruction:
    def test_hyperedge_needs_two_vertices(self):
        with pytest.raises(ValueError):
            mh(2, [{0}], [])

    def test_head_not_in_tails(self):
        with pytest.raises(ValueError):
            MixedHypergraph(2, (), ((frozenset({0, 1}), 1),))

    def test_vertex_out_of_range(self):
        with pytest.raises(ValueError):
            mh(2, [{0, 2}], [])

    def test_kind_predicates(self):
        assert mh(2, [{0, 1}], []).is_graph()
        assert mh(2, [], [({0}, 1)]).is_digraph()
        assert mh(2, [{0, 1}], [({0}, 1)]).is_mixed_graph()
        assert mh(3, [], [({0, 1}, 2)]).is_dypergraph()
        assert not mh(3, [], [({0, 1}, 2)]).is_digraph()
        assert not mh(3, [{0, 1, 2}], []).is_graph()

    def test_parallel_elements_stay_distinct(self):
        f = mh(2, [{0, 1}, {0, 1}], [({0}, 1), ({0}, 1)])
        assert len(f.hyperedges) == 2
        assert len(f.dyperedges) == 2


class TestTrimOrient:
    def test_trim_picks_tail(self):
        assert trim((frozenset({0, 1}), 2), 1) == (frozenset({1}), 2)

    def test_trim_rejects_non_tail(self):
        with pytest.raises(ValueError):
            trim((frozenset({0}), 1), 1)

    def test_orient_makes_dyperedge(self):
        assert orient(frozenset({0, 1, 2}), 2) == (frozenset({0, 1}), 2)

    def test_orient_all_appends_after_originals(self):
        f = mh(3, [{0, 1}], [({2}, 0)])
        d = orient_all(f, (1,))
        assert d.is_dypergraph()
        assert d.dyperedges[0] == (frozenset({2}), 0)
        assert d.dyperedges[1] == (frozenset({0}), 1)


class TestReachability:
    def test_hyperedge_is_two_way(self):
        f = mh(2, [{0, 1}], [])
        assert reach_from(f, (0,)) == frozenset({0, 1})
        assert reach_from(f, (1,)) == frozenset({0, 1})

    def test_dyperedge_needs_one_tail(self):
        # a dyperedge is traversable from any single tail vertex
        f = mh(3, [], [({0, 1}, 2)])
        assert reach_from(f, (0,)) == frozenset({0, 2})
        assert reach_to(f, (2,)) == frozenset({0, 1, 2})

    def test_mixed_chain(self):
        f = mh(3, [{0, 1}], [({1}, 2)])
        assert reach_from(f, (0,)) == frozenset({0, 1, 2})
        assert reach_to(f, (2,)) == frozenset({0, 1, 2})
        assert reach_to(f, (0,)) == frozenset({0, 1})

    def test_empty_set_conventions(self):
        f = mh(2, [], [({0}, 1)])
        assert reach_to(f, ()) == frozenset()
        assert reach_from(f, ()) == frozenset()
        assert in_degree(f, frozenset()) == 0
        assert entering_count(f, (frozenset(),)) == 0

    @settings(max_examples=60, deadline=None)
    @given(small_graphs(), st.data())
    def test_reach_idempotent_and_monotone(self, spec, data):
        f = build(spec)
        x = frozenset(
            data.draw(st.sets(st.integers(0, f.n - 1), max_size=f.n))
        )
        y = frozenset(
            data.draw(st.sets(st.integers(0, f.n - 1), max_size=f.n))
        )
        fwd = reach_from(f, x)
        assert reach_from(f, fwd) == fwd
        back = reach_to(f, x)
        assert reach_to(f, back) == back
        if x <= y:
            assert reach_from(f, x) <= reach_from(f, y)
            assert reach_to(f, x) <= reach_to(f, y)

    @settings(max_examples=60, deadline=None)
    @given(small_graphs(), st.data())
    def test_in_degree_submodular(self, spec, data):
        f = build(spec)
        verts = st.sets(st.integers(0, f.n - 1), max_size=f.n)
        x = frozenset(data.draw(verts))
        y = frozenset(data.draw(verts))
        assert in_degree(f, x) + in_degree(f, y) >= (
            in_degree(f, x & y) + in_degree(f, x | y)
        )


class TestCondensation:
    def test_two_cycle_single_component(self):
        f = mh(2, [], [({0}, 1), ({1}, 0)])
        assert scc_condense(f) == (frozenset({0, 1}),)

    def test_hyperedge_merges_components(self):
        f = mh(2, [{0, 1}], [])
        assert scc_condense(f) == (frozenset({0, 1}),)

    def test_chain_is_topologically_ordered(self):
        f = mh(3, [], [({0}, 1), ({1}, 2)])
        comps = scc_condense(f)
        assert comps == (frozenset({0}), frozenset({1}), frozenset({2}))

    def test_order_is_a_topological_order(self):
        f = mh(4, [], [({0}, 1), ({2}, 1), ({1}, 3)])
        comps = scc_condense(f)
        position = {min(c): i for i, c in enumerate(comps)}
        for tails, head in f.dyperedges:
            for t in tails:
                ct = next(c for c in comps if t in c)
                ch = next(c for c in comps if head in c)
                if ct != ch:
                    assert position[min(ct)] < position[min(ch)]

    def test_components_partition_vertices(self):
        f = mh(4, [{0, 1}], [({1}, 2)])
        comps = scc_condense(f)
        seen = set()
        for c in comps:
            assert not (c & seen)
            seen |= c
        assert seen == set(range(4))


class TestEnteringCounts:
    def test_arc_enters_head_side(self):
        f = mh(2, [], [({0}, 1)])
        assert in_degree(f, frozenset({1})) == 1
        assert in_degree(f, frozenset({0})) == 0
        assert in_degree(f, frozenset({0, 1})) == 0

    def test_dyperedge_with_tail_inside_does_not_enter(self):
        f = mh(3, [], [({0, 1}, 2)])
        assert in_degree(f, frozenset({2})) == 1
        assert in_degree(f, frozenset({1, 2})) == 1
        assert in_degree(f, frozenset({0, 2})) == 1
        assert in_degree(f, frozenset({0, 1, 2})) == 0

    def test_hyperedge_enters_when_it_crosses(self):
        f = mh(3, [{0, 1}], [])
        assert entering_count(f, (frozenset({0}),)) == 1
        assert entering_count(f, (frozenset({2}),)) == 0
        assert entering_count(f, (frozenset({0, 1}),)) == 0

    def test_rho_lists_entering_dyperedge_indices(self):
        f = mh(3, [], [({0}, 1), ({2}, 1), ({1}, 0)])
        assert rho(f, frozenset({1})) == (0, 1)
        assert rho(f, frozenset({0, 1})) == (1,)

    def test_entering_count_counts_each_element_once(self):
        # one hyperedge crossing both parts is still one element
        f = mh(3, [{0, 1, 2}], [])
        parts = (frozenset({0}), frozenset({1}))
        assert entering_count(f, parts) == 1

    def test_entering_count_sums_distinct_elements(self):
        f = mh(3, [], [({0}, 1), ({0}, 2)])
        parts = (frozenset({1}), frozenset({2}))
        assert entering_count(f, parts) == 2


class TestInducedSubgraph:
    def test_keeps_inside_elements_only(self):
        f = mh(3, [{0, 1}, {1, 2}], [({0}, 1), ({2}, 1)])
        sub, hmap, amap = induced_subgraph(f, frozenset({0, 1}))
        assert sub.n == 2
        assert len(sub.hyperedges) == 1
        assert len(sub.dyperedges) == 1
        assert hmap == [0]
        assert amap == [0]

    def test_relabels_to_dense_indices(self):
        f = mh(3, [], [({1}, 2)])
        sub, _, amap = induced_subgraph(f, frozenset({1, 2}))
        assert sub.dyperedges == ((frozenset({0}), 1),)
        assert amap == [0]


class TestBudget:
    def test_budget_raises_at_cap(self):
        b = Budget(3)
        b.spend(3)
        with pytest.raises(CapExceededError):
            b.spend()

    def test_enumeration_respects_budget(self):
        with pytest.raises(CapExceededError):
            list(subsets(range(10), budget=Budget(5)))


class TestEnumerationOrders:
    def test_subsets_size_then_lex(self):
        got = list(subsets([0, 1, 2]))
        assert got[0] == frozenset()
        assert got[1:4] == [frozenset({0}), frozenset({1}), frozenset({2})]
        assert got[-1] == frozenset({0, 1, 2})
        assert len(got) == 8

    def test_set_partitions_count(self):
        assert len(list(set_partitions(range(4)))) == 15  # Bell(4)

    def test_set_partitions_blocks_by_first_appearance(self):
        first = next(iter(set_partitions([0, 1, 2])))
        assert first == (frozenset({0, 1, 2}),)

    def test_subpartitions_include_empty_first(self):
        got = list(subpartitions([0, 1]))
        assert got[0] == ()
        # empty, {0}, {1}, {0,1}, {0}{1}
        assert len(got) == 5

    def test_subpartition_validation(self):
        with pytest.raises(ValueError):
            Subpartition((frozenset(), frozenset({1})))
        with pytest.raises(ValueError):
            Subpartition((frozenset({0}), frozenset({0, 1})))


class TestRootMultiset:
    def test_copies_enumerate_multiplicity(self):
        s = RootMultiset((2, 0, 1))
        assert s.copies() == ((0, 0), (0, 1), (2, 0))
        assert s.size() == 3
        assert s.size_of({0, 1}) == 2
        assert s.support() == frozenset({0, 2})

    def test_restrict_keeps_copy_identity(self):
        s = RootMultiset((2, 1))
        assert s.restrict({0}) == ((0, 0), (0, 1))

    def test_negative_counts_rejected(self):
        with pytest.raises(ValueError):
            RootMultiset((-1,))


def test_arc_helper_matches_manual():
    assert arc(0, 1) == (frozenset({0}), 1)
