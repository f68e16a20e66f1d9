"""의존성 그래프 표현과 독립집합 서브루틴 테스트"""

import itertools

import numpy as np
import pytest
from hypothesis import given, settings

from src.services.exceptions import GraphSizeError, InputError
from src.services.graph import (
    BandedGraph,
    BlockGraph,
    build_graph,
    complete_graph,
    connected_components,
    empty_graph,
    independence_number,
    induced_subgraph,
    largest_ind_containing,
    maximal_independent_sets,
)
from tests.strategies import small_graphs


def _brute_independent_sets(g):
    m = g.m
    out = []
    for size in range(m + 1):
        for subset in itertools.combinations(range(1, m + 1), size):
            if all(not g.has_edge(a, b) for a, b in itertools.combinations(subset, 2)):
                out.append(frozenset(subset))
    return out


def _brute_maximal(g):
    sets = _brute_independent_sets(g)
    return sorted(tuple(sorted(s)) for s in sets if not any(s < t for t in sets))


class TestBuildGraph:
    def test_hub_neighbors(self, hub_graph):
        assert hub_graph.neighbors(1) == (2, 3)
        assert hub_graph.neighbors(5) == (3,)
        assert hub_graph.neighborhood(5) == (3, 5)
        assert hub_graph.n_edges == 5

    def test_empty_graph(self):
        g = build_graph(3, [])
        assert all(g.neighbors(i) == () for i in (1, 2, 3))

    def test_dedup_and_self_loops(self):
        g = build_graph(4, [(1, 1), (1, 2), (2, 1)])
        assert g.edges() == [(1, 2)]
        assert g.neighbors(3) == ()

    def test_out_of_range_endpoint(self):
        with pytest.raises(InputError):
            build_graph(3, [(1, 4)])

    @given(small_graphs())
    @settings(max_examples=50, deadline=None)
    def test_symmetry(self, g):
        for i in range(1, g.m + 1):
            for j in g.neighbors(i):
                assert i in g.neighbors(j)
            assert i not in g.neighbors(i)


class TestStructuredGraphs:
    def test_block_graph_matches_explicit(self):
        g = BlockGraph([2, 3])
        explicit = build_graph(5, [(1, 2), (3, 4), (3, 5), (4, 5)])
        assert g.adjacency == explicit.adjacency
        assert g.blocks() == ((1, 2), (3, 4, 5))

    def test_banded_from_bandwidth(self):
        g = BandedGraph.from_bandwidth(6, 5)
        assert g.half_width == 2
        assert g.neighbors(1) == (2, 3)
        assert g.neighbors(4) == (2, 3, 5, 6)
        assert list(g.degrees()) == [2, 3, 4, 4, 3, 2]

    def test_bandwidth_one_is_empty(self):
        g = BandedGraph.from_bandwidth(4, 1)
        assert g.n_edges == 0
        assert connected_components(g).n_components == 4

    def test_complete_graph(self):
        g = complete_graph(4)
        assert g.n_edges == 6


class TestComponents:
    def test_connected(self, hub_graph):
        assert connected_components(hub_graph).components == ((1, 2, 3, 4, 5),)

    def test_empty_singletons(self):
        assert connected_components(empty_graph(3)).components == ((1,), (2,), (3,))

    def test_two_blocks(self):
        index = connected_components(build_graph(4, [(1, 2), (3, 4)]))
        assert index.components == ((1, 2), (3, 4))
        assert index.component_of(4) == 2

    def test_order_by_smallest_member(self):
        index = connected_components(build_graph(5, [(2, 5), (1, 3)]))
        assert index.components == ((1, 3), (2, 5), (4,))


class TestInducedSubgraph:
    def test_hub_subset(self, hub_graph):
        sub, mapping = induced_subgraph(hub_graph, [1, 2, 4])
        assert mapping == (1, 2, 4)
        assert sub.edges() == [(1, 2)]

    def test_empty_subset(self, hub_graph):
        sub, mapping = induced_subgraph(hub_graph, [])
        assert sub.m == 0 and mapping == ()

    def test_identity(self, hub_graph):
        sub, _ = induced_subgraph(hub_graph, range(1, 6))
        assert sub.edges() == hub_graph.edges()

    def test_out_of_range(self, hub_graph):
        with pytest.raises(InputError):
            induced_subgraph(hub_graph, [0, 1])


class TestIndependentSets:
    def test_hub_graph(self, hub_graph):
        assert maximal_independent_sets(hub_graph) == [(1, 4, 5), (2, 4, 5), (3,)]

    def test_complete(self):
        assert maximal_independent_sets(complete_graph(3)) == [(1,), (2,), (3,)]

    def test_empty(self):
        assert maximal_independent_sets(empty_graph(3)) == [(1, 2, 3)]

    def test_zero_nodes(self):
        g, _ = induced_subgraph(empty_graph(2), [])
        assert maximal_independent_sets(g) == [()]
        assert independence_number(g) == 0

    @given(small_graphs())
    @settings(max_examples=60, deadline=None)
    def test_matches_brute_force(self, g):
        assert maximal_independent_sets(g) == _brute_maximal(g)

    def test_independence_numbers(self):
        assert independence_number(build_graph(3, [(1, 2), (2, 3)])) == 2
        assert independence_number(complete_graph(4)) == 1
        assert independence_number(empty_graph(7)) == 7

    def test_guard(self):
        path = build_graph(6, [(i, i + 1) for i in range(1, 6)])
        with pytest.raises(GraphSizeError) as info:
            maximal_independent_sets(path, guard=5)
        assert info.value.component_id == 1

    def test_clique_components_skip_guard(self):
        assert independence_number(complete_graph(100), guard=5) == 1


class TestLargestIndContaining:
    def test_leaf_node(self, hub_graph, hub_p):
        found = largest_ind_containing(hub_graph, hub_p, 0.05, 5, 3)
        assert len(found) == 3
        assert 5 in found

    def test_hub_node(self, hub_graph, hub_p):
        for r in range(1, 6):
            assert largest_ind_containing(hub_graph, hub_p, 0.05, 3, r) == (3,)

    def test_isolated_node_collects_everything(self):
        p = np.array([0.5, 0.0, 0.0, 0.0])
        assert largest_ind_containing(empty_graph(4), p, 0.1, 1, 4) == (1, 2, 3, 4)
