"""고속 IndBH 엔진: 축소, V 테이블, 저비용 판정, 파이프라인"""

import numpy as np
import pytest
from hypothesis import given, settings

from src.services.engine import (
    Verdict,
    beta_exact,
    cheap_checks,
    clique_shortcut,
    indbh_fast,
    indbh_k_fast,
    precompute_table,
    reduce_to_bh,
    rejection_levels,
    run_indbh_k,
    update_table,
)
from src.services.exceptions import GraphSizeError, InputError, ParameterError
from src.services.graph import BandedGraph, BlockGraph, build_graph, empty_graph, independence_number
from src.services.oracle import random_instances
from src.services.procedures import bh, indbh_k_reference, indbh_reference
from tests.strategies import instances


@pytest.fixture
def hub_table(hub_graph, hub_p):
    rp = reduce_to_bh(hub_p, 0.05, hub_graph)
    return rp, precompute_table(rp)


class TestReduction:
    def test_levels_match_threshold_comparison(self):
        p = np.array([0.0, 0.02, 0.021, 0.05, 0.3])
        levels = rejection_levels(p, 0.05, 5, 5)
        assert list(levels) == [1, 2, 3, 5, 6]

    def test_levels_cap(self):
        assert list(rejection_levels(np.array([0.04]), 0.05, 5, 2)) == [3]

    def test_reduce_single_survivor(self):
        p = np.array([0.001, 1.0, 1.0, 1.0, 1.0])
        rp = reduce_to_bh(p, 0.05, empty_graph(5))
        assert rp.kept == (1,)
        assert rp.alpha_adj == pytest.approx(0.01)
        assert rp.id_map == {1: 1}

    def test_reduce_nothing(self):
        rp = reduce_to_bh(np.array([0.5, 0.9]), 0.05, empty_graph(2))
        assert rp.size == 0

    def test_r_bar_must_cover_bh(self, hub_graph, hub_p):
        with pytest.raises(ParameterError):
            reduce_to_bh(hub_p, 0.05, hub_graph, r_bar=2)

    def test_r_bar_extension(self):
        p = np.array([0.01, 0.25, 0.9])
        rp = reduce_to_bh(p, 0.3, empty_graph(3), r_bar=3)
        assert rp.kept == (1, 2)

    def test_graph_size_mismatch(self, hub_p):
        with pytest.raises(InputError):
            reduce_to_bh(hub_p, 0.05, empty_graph(4))

    def test_local_ids(self, hub_table):
        rp, _ = hub_table
        assert list(rp.local([5, 1])) == [0, 4]


class TestIndNumTable:
    def test_hub_values(self, hub_table):
        _, t = hub_table
        assert t.values().tolist() == [[1, 2, 2, 3, 3]]
        assert t.r_bar == 2

    def test_mask_hub(self, hub_table):
        _, t = hub_table
        masked = update_table(t, [3])
        assert masked.values().tolist() == [[0, 2, 2, 3, 3]]
        # 원본 테이블은 그대로
        assert t.values().tolist() == [[1, 2, 2, 3, 3]]

    def test_mask_unknown_id(self):
        p = np.array([0.001, 1.0, 1.0])
        t = precompute_table(reduce_to_bh(p, 0.05, empty_graph(3)))
        with pytest.raises(InputError):
            update_table(t, [2])

    def test_block_components(self):
        p = np.array([0.01, 0.015, 0.02, 0.5])
        t = precompute_table(reduce_to_bh(p, 0.1, BlockGraph([2, 2])))
        assert t.is_clique.all()
        assert t.values().sum(axis=0).tolist() == [2, 2, 2]

    def test_guard_on_non_clique_component(self):
        path = build_graph(6, [(i, i + 1) for i in range(1, 6)])
        with pytest.raises(GraphSizeError):
            precompute_table(reduce_to_bh(np.zeros(6), 0.1, path), guard=5)


class TestChecks:
    def test_hub_verdicts(self, hub_table):
        rp, t = hub_table
        bounds, verdicts = cheap_checks(t, rp)
        assert (bounds.beta_plus, bounds.beta_minus) == (2, 1)
        assert verdicts[3] == Verdict.REJECT
        assert verdicts[5] == Verdict.NOREJECT
        assert {i for i, v in verdicts.items() if v == Verdict.UNDECIDED} == {1, 2, 4}

    def test_beta_exact(self, hub_table):
        rp, t = hub_table
        assert beta_exact(rp, t, [], 4) == 2
        assert beta_exact(rp, t, [], 3) == 1

    def test_component_bounds_reported(self, hub_table):
        rp, t = hub_table
        bounds, _ = cheap_checks(t, rp)
        assert bounds.beta_minus_i == {1: 1}


class TestCliqueShortcut:
    def test_two_blocks(self):
        p = [0.01, 0.015, 0.02, 0.5]
        assert clique_shortcut(p, 0.1, [[1, 2], [3, 4]]).members == (1, 2, 3)

    def test_not_a_partition(self):
        with pytest.raises(InputError):
            clique_shortcut([0.1, 0.2, 0.3], 0.1, [[1, 2], [2, 3]])

    @given(instances(min_m=2, max_m=8))
    @settings(max_examples=40, deadline=None)
    def test_matches_engine_on_blocks(self, instance):
        p, alpha, _ = instance
        g = BlockGraph.equal_blocks(p.size, 2)
        assert clique_shortcut(p, alpha, g.blocks()) == indbh_fast(p, alpha, g)


class TestPipeline:
    def test_hub_example(self, hub_graph, hub_p):
        assert indbh_fast(hub_p, 0.05, hub_graph).members == (1, 2, 3, 4)
        assert indbh_k_fast(hub_p, 0.05, hub_graph, 2).members == (1, 2, 3, 4, 5)

    def test_zero_triangle(self, hub_graph):
        p = np.array([0.0, 0.0, 0.0, 0.04, 0.04])
        assert indbh_fast(p, 0.05, hub_graph).members == (1, 2, 3)
        assert indbh_k_fast(p, 0.05, hub_graph, 2).members == (1, 2, 3)

    def test_nothing_survives_reduction(self):
        run = run_indbh_k(np.array([0.9, 0.8]), 0.05, empty_graph(2), 2)
        assert run.rejections.members == ()
        assert run.stats.kept == 0

    def test_k_must_be_positive(self, hub_graph, hub_p):
        with pytest.raises(InputError):
            run_indbh_k(hub_p, 0.05, hub_graph, 0)

    def test_stats(self, hub_graph, hub_p):
        run = run_indbh_k(hub_p, 0.05, hub_graph, 1)
        assert run.stats.kept == 5
        assert run.stats.components == 1
        assert run.stats.exact_calls == 3

    def test_thread_count_does_not_change_result(self):
        rng = np.random.default_rng(7)
        p = np.where(rng.uniform(size=60) < 0.3, rng.uniform(0, 0.01, size=60), rng.uniform(size=60))
        g = BandedGraph.from_bandwidth(60, 5)
        for k in (1, 2):
            single = indbh_k_fast(p, 0.1, g, k, threads=1)
            pooled = indbh_k_fast(p, 0.1, g, k, threads=4)
            assert single == pooled

    def test_exact_call_count_survives_threads(self):
        rng = np.random.default_rng(7)
        p = np.where(rng.uniform(size=60) < 0.3, rng.uniform(0, 0.01, size=60), rng.uniform(size=60))
        g = BandedGraph.from_bandwidth(60, 5)
        single = run_indbh_k(p, 0.1, g, 2, threads=1).stats
        pooled = run_indbh_k(p, 0.1, g, 2, threads=4).stats
        # 같은 마스크가 두 번 계산될 수는 있어도 횟수가 사라지면 안 된다
        assert pooled.exact_calls >= single.exact_calls

    @given(instances())
    @settings(max_examples=80, deadline=None)
    def test_matches_reference(self, instance):
        p, alpha, g = instance
        assert indbh_fast(p, alpha, g) == indbh_reference(p, alpha, g)

    @given(instances(max_m=5))
    @settings(max_examples=50, deadline=None)
    def test_k_matches_reference(self, instance):
        p, alpha, g = instance
        for k in (2, 3):
            assert indbh_k_fast(p, alpha, g, k) == indbh_k_reference(p, alpha, g, k)

    @given(instances())
    @settings(max_examples=40, deadline=None)
    def test_subset_of_bh(self, instance):
        p, alpha, g = instance
        assert indbh_k_fast(p, alpha, g, 2).issubset(bh(p, alpha))


def _set_to_one(p: np.ndarray, ids) -> np.ndarray:
    q = p.copy()
    q[[i - 1 for i in ids]] = 1.0
    return q


def _indbh_k(p, alpha, g, k):
    return indbh_reference(p, alpha, g) if k == 1 else indbh_k_reference(p, alpha, g, k)


@pytest.fixture(scope="module")
def continuous_instances():
    return random_instances(150, m_max=8, seed=21)


class TestInvariants:
    def test_reduction_equivalence(self, continuous_instances):
        for inst in continuous_instances:
            p, alpha, g = inst.p, inst.alpha, inst.graph
            expected = indbh_reference(p, alpha, g)
            r_star = len(bh(p, alpha))
            for r_bar in sorted({r_star, (r_star + inst.m) // 2, inst.m}):
                rp = reduce_to_bh(p, alpha, g, r_bar)
                if rp.size == 0:
                    assert len(expected) == 0
                    continue
                reduced = indbh_reference(rp.sub_p, rp.alpha_adj, rp.sub_graph)
                assert tuple(rp.id_map[i] for i in reduced) == expected.members
                assert indbh_fast(p, alpha, g, r_bar=r_bar) == expected

    @given(instances(max_m=5))
    @settings(max_examples=40, deadline=None)
    def test_engine_ignores_r_bar_choice(self, instance):
        p, alpha, g = instance
        expected = indbh_k_reference(p, alpha, g, 2)
        for r_bar in range(len(bh(p, alpha)), g.m + 1):
            assert indbh_k_fast(p, alpha, g, 2, r_bar=r_bar) == expected

    @given(instances())
    @settings(max_examples=60, deadline=None)
    def test_set_to_one_outside_rejections(self, instance):
        p, alpha, g = instance
        for k in (1, 2):
            rejected = _indbh_k(p, alpha, g, k)
            for i in range(1, g.m + 1):
                if i not in rejected:
                    assert _indbh_k(_set_to_one(p, [i]), alpha, g, k) == rejected

    @given(instances(max_m=5))
    @settings(max_examples=60, deadline=None)
    def test_masking_with_or_without_self(self, instance):
        p, alpha, g = instance
        m = g.m
        for k in (1, 2):
            for i in range(1, m + 1):
                punctured = _indbh_k(_set_to_one(p, g.neighbors(i)), alpha, g, k)
                closed = _indbh_k(_set_to_one(p, g.neighborhood(i)), alpha, g, k)
                # 자기 자신이 기각되지 않으면 i까지 1로 두어도 같다
                if i not in punctured:
                    assert closed == punctured
                count = len(punctured.as_set() | {i})
                fallback = count if i in punctured else len(closed) + 1
                assert (p[i - 1] <= alpha * count / m) == (p[i - 1] <= alpha * fallback / m)

    @given(instances())
    @settings(max_examples=80, deadline=None)
    def test_cheap_verdicts_never_contradict_reference(self, instance):
        p, alpha, g = instance
        rp = reduce_to_bh(p, alpha, g)
        if rp.size == 0:
            return
        t = precompute_table(rp)
        expected = indbh_reference(p, alpha, g)
        _, verdicts = cheap_checks(t, rp)
        for i, verdict in verdicts.items():
            if verdict == Verdict.REJECT:
                assert i in expected
            elif verdict == Verdict.NOREJECT:
                assert i not in expected

    def test_table_counts_match_independence_number(self, continuous_instances):
        for inst in continuous_instances:
            rp = reduce_to_bh(inst.p, inst.alpha, inst.graph, inst.m)
            if rp.size == 0:
                continue
            t = precompute_table(rp)
            assert t.totals[0] == 0
            for r in range(1, t.cap + 1):
                nodes = (np.flatnonzero(rp.levels <= r) + 1).tolist()
                if not nodes:
                    assert t.totals[r] == 0
                    continue
                sub, _ = rp.sub_graph.induced_subgraph(nodes)
                assert t.totals[r] == independence_number(sub)
