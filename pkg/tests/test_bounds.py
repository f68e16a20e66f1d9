"""BH 최악 FDR 상/하한과 BY / BYgraph 보정 수준"""

import pytest

from src.services.bounds import (
    CliqueCover,
    by_level,
    bygraph,
    bygraph_level,
    bygraph_level_numeric,
    fdr_lower_bound,
    fdr_upper_bound,
    greedy_clique_cover,
    summarize_bounds,
)
from src.services.exceptions import InputError, ParameterError
from src.services.graph import BandedGraph, BlockGraph, build_graph, complete_graph, empty_graph
from src.services.procedures import bh


class TestUpperBound:
    def test_complete_pair(self):
        assert fdr_upper_bound(complete_graph(2), 0.1) == pytest.approx(0.15)

    def test_empty_graph_is_alpha(self):
        assert fdr_upper_bound(empty_graph(10), 0.05) == pytest.approx(0.05)

    def test_grows_with_edges(self):
        sparse = fdr_upper_bound(BandedGraph(50, 1), 0.1)
        dense = fdr_upper_bound(BandedGraph(50, 5), 0.1)
        assert 0.1 < sparse < dense


class TestLowerBound:
    def test_bh_global_null_blocks(self):
        cover = CliqueCover.equal_blocks(9, 3)
        assert fdr_lower_bound(cover, 9, 0.5) == pytest.approx(1 - (25 / 36) ** 3)

    def test_singletons_give_alpha(self):
        cover = CliqueCover.equal_blocks(4, 1)
        assert fdr_lower_bound(cover, 4, 0.2) == pytest.approx(1 - (1 - 0.05) ** 4)

    def test_alpha_too_large(self):
        with pytest.raises(ParameterError):
            fdr_lower_bound(CliqueCover.equal_blocks(4, 4), 4, 0.9)

    def test_cover_size_mismatch(self):
        with pytest.raises(InputError):
            fdr_lower_bound(CliqueCover.equal_blocks(4, 2), 5, 0.1)


class TestCliqueCover:
    def test_of_validates_partition(self):
        with pytest.raises(InputError):
            CliqueCover.of([[1, 2], [2, 3]], 3)
        with pytest.raises(InputError):
            CliqueCover.of([[1, 2]], 3)

    def test_of_checks_edges(self):
        g = build_graph(3, [(1, 2)])
        assert CliqueCover.of([[1, 2], [3]], 3, g).sizes == [2, 1]
        with pytest.raises(InputError):
            CliqueCover.of([[1, 3], [2]], 3, g)

    def test_equal_blocks_remainder(self):
        assert CliqueCover.equal_blocks(5, 2).blocks == ((1, 2), (3, 4), (5,))

    def test_greedy_block_graph(self):
        assert greedy_clique_cover(BlockGraph([2, 3])).blocks == ((1, 2), (3, 4, 5))

    def test_greedy_hub(self, hub_graph):
        cover = greedy_clique_cover(hub_graph)
        assert cover.blocks == ((1, 2, 3), (4,), (5,))
        # 결과는 실제 클리크
        CliqueCover.of(cover.blocks, 5, hub_graph)


class TestLevels:
    def test_by_level(self):
        assert by_level(3, 0.55) == pytest.approx(0.3)

    @pytest.mark.parametrize("m,b,alpha", [(100, 10, 0.1), (9, 3, 0.5), (50, 1, 0.05), (1000, 100, 0.2)])
    def test_closed_form_matches_root_finding(self, m, b, alpha):
        assert bygraph_level(m, b, alpha) == pytest.approx(bygraph_level_numeric(m, b, alpha), rel=1e-9)

    def test_singleton_blocks_exceed_by(self):
        assert bygraph_level(100, 1, 0.1) > by_level(100, 0.1)

    def test_invalid_block_size(self):
        with pytest.raises(ParameterError):
            bygraph_level(10, 11, 0.1)

    def test_bygraph_procedure(self):
        p = [0.001, 0.02, 0.5, 0.9]
        level = bygraph_level(4, 2, 0.1)
        assert bygraph(p, 0.1, 2) == bh(p, level)


class TestSummary:
    def test_complete_pair(self):
        result = summarize_bounds(complete_graph(2), 0.1, block_size=2)
        assert result.upper == pytest.approx(0.15)
        assert result.n_edges == 1
        assert result.max_degree == 1
        assert result.lower == pytest.approx(1 - (1 - 0.1 * 1.5))
        assert result.bygraph_level == pytest.approx(bygraph_level(2, 2, 0.1))

    def test_lower_dropped_when_undefined(self):
        result = summarize_bounds(complete_graph(4), 0.9)
        assert result.lower is None
        assert result.bygraph_level is None
