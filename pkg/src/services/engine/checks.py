"""V 테이블 기반의 저비용 기각/비기각 판정과 정확한 로컬 임계값 β_i

r_i ≤ r ⇔ p̃_i ≤ αr/m 이며, 판정은 모두 레벨 비교로 수행한다.
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable

import numpy as np

from src.services.engine.reduction import ReducedProblem
from src.services.engine.table import IndNumTable, _earliest_steps, update_table

logger = logging.getLogger(__name__)


class Verdict(str, Enum):
    REJECT = "reject"
    NOREJECT = "noreject"
    UNDECIDED = "undecided"


@dataclass(frozen=True)
class CheckBounds:
    """β⁺, β⁻ 와 컴포넌트별 β⁻_i (컴포넌트 id는 1-based)"""

    beta_plus: int
    beta_minus: int
    beta_minus_i: dict[int, int] = field(default_factory=dict)


def _last_true(ok: np.ndarray) -> int:
    hits = np.flatnonzero(ok)
    return int(hits[-1]) + 1 if hits.size else 0


def global_bounds(t: IndNumTable) -> tuple[int, int]:
    """(β⁺, β⁻): β⁺ = r̄, β⁻ = max{r ≤ r̄ : ΣV − max_k V_k + 1 ≥ r}"""
    r_bar = t.r_bar
    if r_bar == 0:
        return 0, 0
    r = np.arange(1, r_bar + 1)
    slack = t.totals[1:r_bar + 1] - t.max_profile(r_bar) + 1
    return r_bar, _last_true(slack >= r)


def component_bound(t: IndNumTable, k: int, r_bar: int) -> int:
    """β⁻_i = max{r ≤ r̄ : ΣV − V_κ + 1 ≥ r} (k는 0-based)"""
    if r_bar == 0:
        return 0
    r = np.arange(1, r_bar + 1)
    return _last_true(t.totals[1:r_bar + 1] - t.column(k, r_bar) + 1 >= r)


def classify(t: IndNumTable) -> tuple[np.ndarray, np.ndarray, CheckBounds]:
    """(기각, 미결정) 0-based 마스크와 사용한 경계값

    β⁻/β⁺ 일괄 판정 후, 미결정 노드가 있는 컴포넌트에 한해 β⁻_i를 계산한다.
    """
    beta_plus, beta_minus = global_bounds(t)
    levels = t.levels
    reject = levels <= beta_minus
    undecided = ~reject & (levels <= beta_plus)
    per_component: dict[int, int] = {}
    if undecided.any():
        labels = t.components.labels
        for k in np.unique(labels[undecided]):
            bound = component_bound(t, int(k), beta_plus)
            per_component[int(k) + 1] = bound
            hit = undecided & (labels == k) & (levels <= bound)
            reject |= hit
        undecided &= ~reject
    return reject, undecided, CheckBounds(beta_plus, beta_minus, per_component)


def exact_bound(t: IndNumTable, i: int) -> int:
    """max{r ≤ r̄ : |Ĩ_i(r)| ≥ r} (i는 0-based 축소 인덱스)

    |Ĩ_i(r)| = 1 + IndNum(𝔻_κ[Q̃_{−i}(r)]) + Σ_{k≠κ} Ṽ_{k,r}. 두 번째 항은
    i를 포함하는 κ의 극대 독립집합만으로 계산한다.
    """
    r_bar = t.r_bar
    if r_bar == 0:
        return 0
    k = int(t.components.labels[i])
    if t.is_clique[k]:
        inner = np.zeros(r_bar, dtype=np.int64)
    else:
        rows = [t.levels[s[s != i]] for s in t.mis_cache[k] if np.any(s == i)]
        steps = _earliest_steps(rows, t.cap)
        inner = np.searchsorted(steps, np.arange(1, r_bar + 1), side="right")
    r = np.arange(1, r_bar + 1)
    size = 1 + inner + t.totals[1:r_bar + 1] - t.column(k, r_bar)
    return _last_true(size >= r)


def cheap_checks(
    t: IndNumTable,
    rp: ReducedProblem,
    masked: Iterable[int] = (),
) -> tuple[CheckBounds, dict[int, Verdict]]:
    """마스크 적용 후 모든 kept 가설의 판정 (원래 id 기준)"""
    table = update_table(t, masked)
    beta_plus, beta_minus = global_bounds(table)
    levels = table.levels
    bounds = {
        k + 1: component_bound(table, k, beta_plus) for k in range(table.components.n_components)
    }
    labels = table.components.labels
    verdicts: dict[int, Verdict] = {}
    for i, original in enumerate(rp.kept):
        if levels[i] <= beta_minus or levels[i] <= bounds[int(labels[i]) + 1]:
            verdicts[original] = Verdict.REJECT
        elif levels[i] > beta_plus:
            verdicts[original] = Verdict.NOREJECT
        else:
            verdicts[original] = Verdict.UNDECIDED
    return CheckBounds(beta_plus, beta_minus, bounds), verdicts


def beta_exact(rp: ReducedProblem, t: IndNumTable, masked: Iterable[int], i: int) -> int:
    """가설 i (원래 id)의 마스크 적용 후 정확한 기각 하한 β_i"""
    table = update_table(t, masked)
    return exact_bound(table, int(rp.local([i])[0]))
