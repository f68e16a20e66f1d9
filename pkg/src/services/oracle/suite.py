"""오라클 동치성 + 성질 검사 묶음 (oracle-check 명령의 본체)"""

import logging
import time
from typing import Callable, Iterable, Optional

import numpy as np
from pydantic import BaseModel, Field
from tqdm import tqdm

from src.config import app_config as config
from src.services.engine import indbh_fast, indbh_k_fast
from src.services.exceptions import ParameterError
from src.services.oracle.brute_force import brute_force_indbh, brute_force_indbh_k
from src.services.oracle.properties import DEFAULT_DENSITIES, ProblemInstance, random_instances
from src.services.procedures.classical import bh
from src.services.procedures.graph_adapted import (
    indbh_k_reference,
    indbh_reference,
    naive_adjusted_bh,
    su_fixed_point,
)
from src.services.types import RejectionSet

logger = logging.getLogger(__name__)

FastIndBH = Callable[..., RejectionSet]


class SuiteFailure(BaseModel):
    """첫 번째로 관찰된 불일치 (재현용 입력 포함)"""

    check: str = Field(..., description="실패한 검사 이름")
    family: str = Field(..., description="그래프 종류")
    alpha: float = Field(..., description="유의수준")
    pvalues: list[float] = Field(..., description="p-value 벡터")
    edges: list[tuple[int, int]] = Field(..., description="그래프 엣지 (1-based)")
    detail: str = Field("", description="불일치 내용")


class OracleSuiteReport(BaseModel):
    trials: int = Field(..., description="인스턴스 수")
    m_max: int = Field(..., description="최대 가설 수")
    checks: dict[str, int] = Field(default_factory=dict, description="검사별 실행 횟수")
    failures: list[SuiteFailure] = Field(default_factory=list, description="검사별 첫 실패")
    naive_p1_violations: int = Field(0, description="대조군(naive)이 자기 일관성을 어긴 인스턴스 수")
    seconds: float = Field(0.0, description="소요 시간")

    @property
    def passed(self) -> bool:
        return not self.failures


def _fmt(rs: RejectionSet) -> str:
    return "{" + ",".join(str(i) for i in rs) + "}"


Rule = Callable[[np.ndarray], RejectionSet]


class _Recorder:
    def __init__(self, report: OracleSuiteReport):
        self.report = report
        self.failed: set[str] = set()

    def check(self, name: str, ok: bool, inst: ProblemInstance, detail: Callable[[], str]) -> None:
        self.report.checks[name] = self.report.checks.get(name, 0) + 1
        if ok or name in self.failed:
            return
        self.failed.add(name)
        self.report.failures.append(SuiteFailure(
            check=name,
            family=inst.family,
            alpha=inst.alpha,
            pvalues=inst.p.tolist(),
            edges=inst.graph.edges(),
            detail=detail(),
        ))
        logger.warning(f"❌ {name} 실패 ({inst.family}, m={inst.m}): {detail()}")


def _check_properties(rec: _Recorder, name: str, rule: Rule, inst: ProblemInstance, base: RejectionSet) -> None:
    """(P1) 자기 일관성, (P2) p/2 단조성, (P3) 이웃 무시성"""
    p, alpha, g = inst.p, inst.alpha, inst.graph
    limit = alpha * len(base) / inst.m
    rec.check(f"P1 {name}", all(p[i - 1] <= limit for i in base), inst, lambda: f"ℛ={_fmt(base)}")
    halved = rule(p / 2.0)
    rec.check(f"P2 {name}", base.issubset(halved), inst, lambda: f"ℛ(p)={_fmt(base)}, ℛ(p/2)={_fmt(halved)}")
    for i in range(inst.m):
        neighbors = g._neighbors0(i)
        if not neighbors.size:
            continue
        q = p.copy()
        q[neighbors] = 1.0
        blind = rule(q)
        rec.check(f"P3 {name}", ((i + 1) in base) == ((i + 1) in blind), inst, lambda: f"i={i + 1}")


def run_oracle_suite(
    trials: int,
    m_max: int = 10,
    seed: int = 0,
    densities: Iterable[float] = DEFAULT_DENSITIES,
    ks: Iterable[int] = (2, 3),
    fast_indbh: Optional[FastIndBH] = None,
    fast_indbh_k: Optional[FastIndBH] = None,
) -> OracleSuiteReport:
    """무작위 인스턴스에서 고속/참조/전수 구현의 일치와 (P1)(P3), 포함 사슬을 검사

    fast_indbh / fast_indbh_k 를 바꿔 끼우면 검사기 자체를 점검할 수 있다.
    """
    if trials < 1:
        raise ParameterError(f"trials는 1 이상이어야 합니다 (현재 {trials})")
    if m_max < 1 or m_max > config.ORACLE_NODE_GUARD:
        raise ParameterError(f"m_max={m_max}는 1..{config.ORACLE_NODE_GUARD} 범위여야 합니다")
    fast_indbh = fast_indbh or indbh_fast
    fast_indbh_k = fast_indbh_k or indbh_k_fast
    ks = sorted(set(ks))
    started = time.perf_counter()
    report = OracleSuiteReport(trials=trials, m_max=m_max)
    rec = _Recorder(report)
    instances = random_instances(trials, m_max=m_max, seed=seed, densities=densities)

    for inst in tqdm(instances, desc="오라클 검사", disable=not config.SHOW_PROGRESS, leave=False):
        p, alpha, g = inst.p, inst.alpha, inst.graph
        m = inst.m
        brute = brute_force_indbh(p, alpha, g)
        reference = indbh_reference(p, alpha, g)
        fast = fast_indbh(p, alpha, g)
        rec.check("indbh_reference == brute_force", reference == brute, inst,
                  lambda: f"reference={_fmt(reference)}, brute={_fmt(brute)}")
        rec.check("indbh_fast == brute_force", fast == brute, inst,
                  lambda: f"fast={_fmt(fast)}, brute={_fmt(brute)}")

        _check_properties(rec, "indbh", lambda q: brute_force_indbh(q, alpha, g), inst, brute)

        chain = [("indbh", brute)]
        for k in ks:
            fast_k = fast_indbh_k(p, alpha, g, k)
            reference_k = indbh_k_reference(p, alpha, g, k)
            brute_k = brute_force_indbh_k(p, alpha, g, k)
            rec.check(f"indbh{k}_reference == brute_force", reference_k == brute_k, inst,
                      lambda: f"reference={_fmt(reference_k)}, brute={_fmt(brute_k)}")
            rec.check(f"indbh{k}_fast == brute_force", fast_k == brute_k, inst,
                      lambda: f"fast={_fmt(fast_k)}, brute={_fmt(brute_k)}")
            _check_properties(rec, f"indbh{k}", lambda q, k=k: brute_force_indbh_k(q, alpha, g, k), inst, brute_k)
            chain.append((f"indbh{k}", brute_k))
        su = su_fixed_point(p, alpha, g)
        _check_properties(rec, "su", lambda q: su_fixed_point(q, alpha, g), inst, su)
        chain += [("su", su), ("bh", bh(p, alpha))]

        # 대조군은 (P1)을 보장하지 않으므로 실패가 아니라 횟수로만 남긴다
        naive = naive_adjusted_bh(p, alpha, g)
        if any(p[i - 1] > alpha * len(naive) / m for i in naive):
            report.naive_p1_violations += 1
        for (lo_name, lo), (hi_name, hi) in zip(chain, chain[1:]):
            rec.check(f"{lo_name} ⊆ {hi_name}", lo.issubset(hi), inst,
                      lambda: f"{lo_name}={_fmt(lo)}, {hi_name}={_fmt(hi)}")

    report.seconds = time.perf_counter() - started
    if report.passed:
        logger.info(f"✅ 오라클 검사 통과: {trials}개 인스턴스, {sum(report.checks.values())}회 비교, {report.seconds:.1f}s")
    else:
        logger.warning(f"⚠️ 오라클 검사 실패: {len(report.failures)}종류")
    logger.info(f"📊 naive 대조군 (P1) 위반: {report.naive_p1_violations}/{trials}개 인스턴스")
    return report
