"""고전 절차, 그래프 적응 절차, 무작위 가지치기 테스트"""

import math

import numpy as np
import pytest
from hypothesis import given, settings

from src.services.exceptions import InputError, ParameterError
from src.services.graph import BlockGraph, build_graph, complete_graph, empty_graph
from src.services.procedures import (
    ProcedureKind,
    ProcedureSpec,
    bh,
    bh_count,
    bonferroni,
    by,
    ebh_comparator,
    harmonic_number,
    indbh_k_reference,
    indbh_reference,
    mask,
    naive_adjusted_bh,
    step_down_bh,
    su_fixed_point,
)
from src.services.oracle import ProblemInstance, check_neighbor_blindness
from src.services.procedures.pruning import adjusted_counts, randomized_prune
from src.services.procedures.registry import as_callable, run_procedure
from src.services.types import RejectionSet
from tests.strategies import instances


class TestClassical:
    def test_bh_ties_at_threshold(self):
        assert bh([0.25, 0.25, 0.25], 0.3).members == (1, 2, 3)

    def test_step_down_stops_at_first_failure(self):
        assert step_down_bh([0.25, 0.25, 0.25], 0.3).members == ()
        assert step_down_bh([0.05, 0.5, 0.15], 0.3).members == (1, 3)

    def test_bonferroni(self):
        assert bonferroni([0.009, 0.011], 0.02).members == (1,)

    def test_by(self):
        assert by([0.09, 0.5, 0.5], 0.55).members == (1,)

    def test_harmonic_number(self):
        assert harmonic_number(3) == pytest.approx(11 / 6)
        assert harmonic_number(0) == 0.0

    def test_ebh_transformed_level(self):
        # α = 0.1 → α′ = √0.2, p′ = 2√p
        result = ebh_comparator([0.001, 0.9], 0.1)
        assert result.members == (1,)
        assert result.thresholds[1] == pytest.approx(math.sqrt(0.2) / 2)

    def test_ebh_rejects_large_alpha(self):
        with pytest.raises(ParameterError):
            ebh_comparator([0.1], 0.6)

    def test_bh_thresholds_recorded(self):
        result = bh([0.01, 0.08, 0.5], 0.1)
        assert result.members == (1,)
        assert result.thresholds == {1: pytest.approx(0.1 / 3)}

    def test_bh_count_empty(self):
        assert bh_count(np.zeros(0), 0.1) == 0

    def test_mask(self):
        out = mask([0.1, 0.2, 0.3], [2])
        assert list(out) == [0.1, 1.0, 0.3]

    def test_invalid_inputs(self):
        with pytest.raises(InputError):
            bh([0.1, 1.5], 0.1)
        with pytest.raises(InputError):
            bh([], 0.1)
        with pytest.raises(ParameterError):
            bh([0.1], 1.5)

    def test_alpha_zero_only_zero_pvalues(self):
        assert bh([0.0, 0.001], 0.0).members == (1,)


class TestNaiveAdjustedBh:
    def test_complete_graph(self):
        assert naive_adjusted_bh([0.0, 1.0, 1.0], 0.3, complete_graph(3)).members == (1,)

    def test_empty_graph_matches_bh(self):
        p = [0.01, 0.04, 0.06, 0.9]
        assert naive_adjusted_bh(p, 0.1, empty_graph(4)) == bh(p, 0.1)

    @given(instances())
    @settings(max_examples=60, deadline=None)
    def test_empty_graph_is_bh_everywhere(self, instance):
        p, alpha, _ = instance
        assert naive_adjusted_bh(p, alpha, empty_graph(p.size)) == bh(p, alpha)

    def test_graph_size_mismatch(self):
        with pytest.raises(InputError):
            naive_adjusted_bh([0.1, 0.2], 0.1, empty_graph(3))


class TestIndBhReference:
    def test_hub_example(self, hub_graph, hub_p):
        assert indbh_reference(hub_p, 0.05, hub_graph).members == (1, 2, 3, 4)
        assert bh(hub_p, 0.05).members == (1, 2, 3, 4, 5)

    def test_hub_two_steps(self, hub_graph, hub_p):
        assert indbh_k_reference(hub_p, 0.05, hub_graph, 2).members == (1, 2, 3, 4, 5)

    def test_zero_triangle(self, hub_graph):
        p = np.array([0.0, 0.0, 0.0, 0.04, 0.04])
        assert indbh_reference(p, 0.05, hub_graph).members == (1, 2, 3)
        assert indbh_k_reference(p, 0.05, hub_graph, 2).members == (1, 2, 3)
        assert su_fixed_point(p, 0.05, hub_graph).members == (1, 2, 3, 4, 5)

    def test_empty_graph_is_bh(self):
        p = np.array([0.01, 0.02, 0.03, 0.5])
        assert indbh_reference(p, 0.1, empty_graph(4)) == bh(p, 0.1)

    def test_k_must_be_positive(self, hub_graph, hub_p):
        with pytest.raises(InputError):
            indbh_k_reference(hub_p, 0.05, hub_graph, 0)

    def test_k_one_is_indbh(self, hub_graph, hub_p):
        assert indbh_k_reference(hub_p, 0.05, hub_graph, 1) == indbh_reference(hub_p, 0.05, hub_graph)

    @given(instances())
    @settings(max_examples=60, deadline=None)
    def test_nesting_chain(self, instance):
        p, alpha, g = instance
        chain = [
            indbh_reference(p, alpha, g),
            indbh_k_reference(p, alpha, g, 2),
            indbh_k_reference(p, alpha, g, 3),
            su_fixed_point(p, alpha, g),
            bh(p, alpha),
        ]
        for smaller, larger in zip(chain, chain[1:]):
            assert smaller.issubset(larger)

    @given(instances())
    @settings(max_examples=40, deadline=None)
    def test_complete_graph_is_bonferroni(self, instance):
        p, alpha, _ = instance
        assert indbh_reference(p, alpha, complete_graph(p.size)) == bonferroni(p, alpha)


class TestSuFixedPoint:
    @pytest.fixture
    def pairs(self):
        return build_graph(6, [(1, 2), (3, 4), (5, 6)])

    P_PAIRS = np.array([0.2766, 0.004, 0.0059, 0.6624, 0.2716, 0.0])

    def test_runs_past_early_repeat(self, pairs):
        # p에서는 1, 2단계가 같지만 3단계에서 1과 5가 빠진다
        assert su_fixed_point(self.P_PAIRS, 0.5, pairs).members == (2, 3, 6)

    def test_neighbor_blind_on_pairs(self, pairs):
        q = self.P_PAIRS.copy()
        q[1] = 1.0
        assert 1 not in su_fixed_point(q, 0.5, pairs)
        report = check_neighbor_blindness(su_fixed_point, pairs, [ProblemInstance(self.P_PAIRS, 0.5, pairs, "manual")])
        assert report.held

    def test_empty_graph_is_bh(self):
        p = np.array([0.01, 0.02, 0.03, 0.5])
        assert su_fixed_point(p, 0.1, empty_graph(4)) == bh(p, 0.1)


class TestRandomizedPrune:
    def _indbh(self, alpha):
        return ProcedureSpec(kind=ProcedureKind.INDBH, alpha=alpha, reference=True)

    def test_zero_uniforms_keep_adjusted_set(self, hub_graph, hub_p):
        inner = self._indbh(0.05)
        counts = adjusted_counts(hub_p, 0.05, hub_graph, inner)
        adjusted = RejectionSet.from_mask(hub_p <= 0.05 * counts / 5)
        result = randomized_prune(hub_p, 0.05, hub_graph, inner, np.zeros(5))
        assert result == adjusted

    def test_pruned_is_subset_of_adjusted(self, hub_graph, hub_p):
        inner = self._indbh(0.05)
        counts = adjusted_counts(hub_p, 0.05, hub_graph, inner)
        adjusted = RejectionSet.from_mask(hub_p <= 0.05 * counts / 5)
        for seed in range(5):
            u = np.random.default_rng(seed).uniform(size=5)
            assert randomized_prune(hub_p, 0.05, hub_graph, inner, u).issubset(adjusted)

    def test_nothing_adjusted(self):
        inner = self._indbh(0.05)
        result = randomized_prune([0.9, 0.8], 0.05, empty_graph(2), inner, np.zeros(2))
        assert result.members == ()

    def test_uniform_length_mismatch(self, hub_graph, hub_p):
        with pytest.raises(InputError):
            randomized_prune(hub_p, 0.05, hub_graph, self._indbh(0.05), np.zeros(3))


class TestProcedureSpec:
    def test_from_method_names(self):
        assert ProcedureSpec.from_method("indbh2", 0.1).label == "indbh2"
        assert ProcedureSpec.from_method("indbhk=4", 0.1).k == 4
        assert ProcedureSpec.from_method("indbhk=1", 0.1).kind == ProcedureKind.INDBH
        assert ProcedureSpec.from_method("bygraph=100", 0.1).label == "bygraph=100"
        assert ProcedureSpec.from_method("randprune", 0.1).label == "randprune(indbh)"
        assert ProcedureSpec.from_method("randprune", 0.1, inner="su").label == "randprune(su)"
        assert ProcedureSpec.from_method(" BH ", 0.1).kind == ProcedureKind.BH

    def test_unknown_method(self):
        with pytest.raises(ParameterError):
            ProcedureSpec.from_method("magic", 0.1)

    def test_missing_parameter(self):
        with pytest.raises(ParameterError):
            ProcedureSpec.from_method("indbhk=x", 0.1)

    def test_needs_graph(self):
        assert ProcedureSpec.from_method("su", 0.1).needs_graph
        assert not ProcedureSpec.from_method("bh", 0.1).needs_graph


class TestRegistry:
    def test_graph_required(self, hub_p):
        spec = ProcedureSpec.from_method("indbh", 0.05)
        with pytest.raises(InputError):
            run_procedure(spec, hub_p)

    def test_fast_and_reference_agree(self, hub_graph, hub_p):
        fast = ProcedureSpec.from_method("indbh2", 0.05)
        slow = ProcedureSpec.from_method("indbh2", 0.05, reference=True)
        assert run_procedure(fast, hub_p, hub_graph) == run_procedure(slow, hub_p, hub_graph)

    def test_alpha_override(self, hub_p):
        spec = ProcedureSpec.from_method("bonf", 0.05)
        assert run_procedure(spec, hub_p, alpha=0.0).members == ()

    def test_as_callable(self, hub_graph, hub_p):
        proc = as_callable(ProcedureSpec.from_method("indbh", 0.05))
        assert proc.__name__ == "indbh"
        assert proc(hub_p, 0.05, hub_graph).members == (1, 2, 3, 4)

    def test_randprune_with_uniforms(self, hub_graph, hub_p):
        spec = ProcedureSpec.from_method("randprune", 0.05, reference=True)
        expected = randomized_prune(hub_p, 0.05, hub_graph, spec.inner, np.zeros(5))
        assert run_procedure(spec, hub_p, hub_graph, u=np.zeros(5)) == expected

    def test_block_graph_dispatch(self):
        g = BlockGraph([2, 2])
        p = np.array([0.01, 0.015, 0.02, 0.5])
        spec = ProcedureSpec.from_method("indbh", 0.1)
        assert run_procedure(spec, p, g).members == (1, 2, 3)

    def test_explicit_graph_matches_block(self):
        p = np.array([0.01, 0.015, 0.02, 0.5])
        g = build_graph(4, [(1, 2), (3, 4)])
        assert run_procedure(ProcedureSpec.from_method("indbh", 0.1), p, g).members == (1, 2, 3)
