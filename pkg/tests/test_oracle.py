"""전수 오라클, 성질 검사기, 몬테카를로 FDR 추정"""

import numpy as np
import pytest
from hypothesis import given, settings

from src.services.engine import indbh_fast, indbh_k_fast
from src.services.exceptions import GraphSizeError, ParameterError
from src.services.graph import build_graph, empty_graph
from src.services.oracle import (
    ProblemInstance,
    brute_force_indbh,
    brute_force_indbh_k,
    check_monotonicity,
    check_neighbor_blindness,
    check_self_consistency,
    interval_procedure,
    mc_fdr,
    random_instances,
    run_oracle_suite,
)
from src.services.procedures import (
    ProcedureSpec,
    bh,
    indbh_k_reference,
    indbh_reference,
    naive_adjusted_bh,
    su_fixed_point,
)
from src.services.procedures.registry import as_callable
from src.services.simulation import SimScenario
from src.services.types import RejectionSet
from tests.strategies import instances


def _bh(p, alpha, g):
    return bh(p, alpha)


def _indbh(p, alpha, g):
    return indbh_fast(p, alpha, g)


def _indbh2(p, alpha, g):
    return indbh_k_fast(p, alpha, g, 2)


def _indbh3(p, alpha, g):
    return indbh_k_fast(p, alpha, g, 3)


class TestBruteForce:
    def test_hub_example(self, hub_graph, hub_p):
        assert brute_force_indbh(hub_p, 0.05, hub_graph).members == (1, 2, 3, 4)
        assert brute_force_indbh_k(hub_p, 0.05, hub_graph, 2).members == (1, 2, 3, 4, 5)

    def test_guard(self):
        with pytest.raises(GraphSizeError):
            brute_force_indbh(np.zeros(6), 0.1, empty_graph(6), guard=5)

    @given(instances())
    @settings(max_examples=80, deadline=None)
    def test_agrees_with_reference(self, instance):
        p, alpha, g = instance
        assert brute_force_indbh(p, alpha, g) == indbh_reference(p, alpha, g)

    @given(instances(max_m=5))
    @settings(max_examples=40, deadline=None)
    def test_k_agrees_with_reference(self, instance):
        p, alpha, g = instance
        assert brute_force_indbh_k(p, alpha, g, 2) == indbh_k_reference(p, alpha, g, 2)

    def test_interval_procedure(self):
        assert interval_procedure([0.01, 0.03, 0.05, 0.5], 0.1).members == (2, 3)


class TestRandomInstances:
    def test_families_cycle(self):
        insts = random_instances(10, m_max=6, seed=3)
        assert [i.family for i in insts[:5]] == ["er0.1", "er0.3", "er0.6", "block", "banded"]
        assert all(1 <= i.m <= 6 and i.graph.m == i.m for i in insts)

    def test_deterministic(self):
        a = random_instances(5, seed=11)
        b = random_instances(5, seed=11)
        assert all(np.array_equal(x.p, y.p) and x.graph.edges() == y.graph.edges() for x, y in zip(a, b))


class TestPropertyCheckers:
    @pytest.fixture(scope="class")
    def insts(self):
        return random_instances(120, m_max=8, seed=5)

    def test_indbh_properties_hold(self, insts):
        assert check_self_consistency(_indbh, insts).held
        assert check_monotonicity(_indbh, insts).held
        assert check_neighbor_blindness(_indbh, None, insts).held

    def test_su_properties_hold(self, insts):
        assert check_self_consistency(su_fixed_point, insts).held
        assert check_monotonicity(su_fixed_point, insts).held
        assert check_neighbor_blindness(su_fixed_point, None, insts).held

    @pytest.mark.parametrize("proc", [
        _indbh,
        _indbh2,
        _indbh3,
        pytest.param(su_fixed_point, marks=pytest.mark.slow),
    ])
    def test_properties_on_many_instances(self, proc):
        insts = random_instances(500, m_max=8, seed=11)
        assert check_self_consistency(proc, insts).held
        assert check_monotonicity(proc, insts, seed=3).held
        assert check_neighbor_blindness(proc, None, insts).held

    def test_naive_is_not_self_consistent(self):
        # 1은 홀로 떨어져 있고 2-3이 이웃: 1만 기각되지만 p_1 = 0.09 > 0.1·1/3
        g = build_graph(3, [(2, 3)])
        inst = ProblemInstance(np.array([0.09, 0.05, 0.05]), 0.1, g, "manual")
        assert naive_adjusted_bh(inst.p, inst.alpha, g).members == (1,)
        report = check_self_consistency(naive_adjusted_bh, [inst])
        assert [v.witness for v in report.violations] == [[1]]

    def test_bh_is_self_consistent(self, insts):
        report = check_self_consistency(_bh, insts)
        assert report.held
        assert report.procedure == "_bh"
        assert report.instances == 120

    def test_interval_procedure_breaks_checks(self):
        # p = (α/m, 2α/m): 둘 다 기각되지만 p/2 에서는 첫 가설이 빠진다
        g = build_graph(2, [(1, 2)])
        inst = ProblemInstance(np.array([0.05, 0.1]), 0.1, g, "manual")
        assert not check_monotonicity(interval_procedure, [inst]).held
        # p = (0.06, 0.5): 홀로 기각되지만 α·1/m = 0.05 보다 크다
        lonely = ProblemInstance(np.array([0.06, 0.5]), 0.1, g, "manual")
        report = check_self_consistency(interval_procedure, [inst, lonely])
        assert [v.witness for v in report.violations] == [[1]]

    def test_bh_is_not_neighbor_blind(self):
        g = build_graph(2, [(1, 2)])
        inst = ProblemInstance(np.array([0.04, 0.09]), 0.1, g, "manual")
        report = check_neighbor_blindness(_bh, None, [inst])
        assert report.violations[0].witness == [2]


class TestOracleSuite:
    def test_passes(self):
        report = run_oracle_suite(40, m_max=7, seed=1)
        assert report.passed, report.failures
        assert report.checks["indbh_fast == brute_force"] == 40
        assert "indbh3 ⊆ su" in report.checks
        for name in ("indbh", "indbh2", "indbh3", "su"):
            assert report.checks[f"P1 {name}"] == 40
        assert report.naive_p1_violations >= 0

    def test_detects_broken_fast_path(self):
        report = run_oracle_suite(40, m_max=7, seed=1, fast_indbh=lambda p, alpha, g: RejectionSet())
        assert not report.passed
        assert any(f.check == "indbh_fast == brute_force" for f in report.failures)

    def test_bad_arguments(self):
        with pytest.raises(ParameterError):
            run_oracle_suite(0)
        with pytest.raises(ParameterError):
            run_oracle_suite(5, m_max=1000)

    @pytest.mark.slow
    def test_thousand_instances(self):
        report = run_oracle_suite(1000, m_max=12, seed=0)
        assert report.passed, report.failures


class TestMonteCarlo:
    def test_reproducible(self):
        scenario = SimScenario(m=3, dependence="block_adversarial", cover="1|2,3", alpha=0.5)
        a = mc_fdr(_bh, scenario, 200, seed=4)
        b = mc_fdr(_bh, scenario, 200, seed=4)
        assert a.fdr == b.fdr
        assert a.procedure == "_bh"

    def test_single_rep_has_no_se(self):
        scenario = SimScenario(m=4, dependence="block", block_size=2, rho=0.3)
        est = mc_fdr(_bh, scenario, 1)
        assert est.se is None

    def test_reps_must_be_positive(self):
        with pytest.raises(ParameterError):
            mc_fdr(_bh, SimScenario(m=2), 0)

    def test_thread_count_does_not_change_estimate(self):
        scenario = SimScenario(m=20, dependence="block", block_size=5, rho=0.5, pi0=0.8, mu_star=2.5)
        one = mc_fdr(_indbh, scenario, 30, seed=2, threads=1)
        many = mc_fdr(_indbh, scenario, 30, seed=2, threads=4)
        assert one.fdr == many.fdr

    @pytest.mark.slow
    def test_naive_procedure_inflates_fdr(self):
        alpha = 0.5
        expected = alpha * (1 + 2 * alpha ** 2 * (1 - alpha) / (3 * (3 - 2 * alpha) ** 2))
        scenario = SimScenario(m=3, dependence="block_adversarial", cover="1|2,3", alpha=alpha)
        naive = as_callable(ProcedureSpec.from_method("naive", alpha))
        est = mc_fdr(naive, scenario, 100_000, seed=0)
        assert est.fdr == pytest.approx(expected, abs=0.006)
        indbh = mc_fdr(_indbh, scenario, 100_000, seed=0)
        assert indbh.fdr <= alpha + 3 * indbh.se

    @pytest.mark.slow
    def test_bh_global_null_inflation(self):
        scenario = SimScenario(m=9, dependence="block_adversarial", block_size=3, alpha=0.5)
        est = mc_fdr(_bh, scenario, 10_000, seed=0)
        assert est.fdr >= 1 - (25 / 36) ** 3 - 3 * est.se
        for proc in (_indbh, _indbh3):
            controlled = mc_fdr(proc, scenario, 10_000, seed=0)
            assert controlled.fdr <= 0.5 + 3 * controlled.se
