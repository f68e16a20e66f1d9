"""컴포넌트별 독립수 테이블 V[k][r] = IndNum(𝔻_k[Q(r)])

각 열 V_k(·)는 r에 대해 비감소 계단함수이므로 "도달 레벨" 배열 steps[k]로
저장한다: V_k(r) = #{c : steps[k][c] ≤ r}. 극대 독립집합 ℓ마다 레벨을 정렬한
뒤 c번째 원소의 최솟값을 취하면 max_ℓ u_{k,r,ℓ}의 c번째 도달 레벨이 된다.
"""

import logging
from dataclasses import dataclass
from typing import Iterable, Optional

import numpy as np

from src.services.graph import ComponentIndex, component_mis0, connected_components
from src.services.engine.reduction import ReducedProblem

logger = logging.getLogger(__name__)

Mask = frozenset[int]
_EMPTY = np.zeros(0, dtype=np.int64)


def _earliest_steps(rows: list[np.ndarray], cap: int) -> np.ndarray:
    """레벨 배열들에 대해 c번째로 작은 값의 행별 최솟값 (cap 초과는 제거)"""
    rows = [np.sort(r) for r in rows if r.size]
    if not rows:
        return _EMPTY
    width = max(r.size for r in rows)
    mat = np.full((len(rows), width), cap + 1, dtype=np.int64)
    for n, r in enumerate(rows):
        mat[n, :r.size] = r
    best = mat.min(axis=0)
    return best[best <= cap]


def _bincount(steps: Iterable[np.ndarray], cap: int) -> np.ndarray:
    arrays = [s for s in steps if s.size]
    if not arrays:
        return np.zeros(cap + 1, dtype=np.int64)
    return np.bincount(np.concatenate(arrays), minlength=cap + 1)[:cap + 1].astype(np.int64)


@dataclass(frozen=True)
class IndNumTable:
    """불변 독립수 테이블 (마스크 포함)

    levels는 마스킹이 반영된 노드별 레벨 (cap + 1 = 절대 Q(r)에 들지 않음),
    totals[r] = Σ_k V_k(r) (r = 0..cap).
    """

    problem: ReducedProblem
    components: ComponentIndex
    is_clique: np.ndarray
    mis_cache: tuple[Optional[tuple[np.ndarray, ...]], ...]
    levels: np.ndarray
    steps: tuple[np.ndarray, ...]
    totals: np.ndarray
    first_steps: np.ndarray
    masked: Mask = frozenset()

    @property
    def cap(self) -> int:
        return self.problem.size

    @property
    def r_bar(self) -> int:
        """r̄^(1) = max{r ≤ |kept| : Σ_k V[k][r] ≥ r}, 없으면 0"""
        if self.cap == 0:
            return 0
        ok = np.flatnonzero(self.totals[1:] >= np.arange(1, self.cap + 1))
        return int(ok[-1]) + 1 if ok.size else 0

    def column(self, k: int, limit: Optional[int] = None) -> np.ndarray:
        """V_k(r), r = 1..limit (k는 0-based)"""
        limit = self.cap if limit is None else limit
        return np.searchsorted(self.steps[k], np.arange(1, limit + 1), side="right").astype(np.int64)

    def values(self, limit: Optional[int] = None) -> np.ndarray:
        """밀집 행렬 V (컴포넌트 × 레벨 1..limit)"""
        limit = self.cap if limit is None else limit
        if not self.steps:
            return np.zeros((0, limit), dtype=np.int64)
        return np.vstack([self.column(k, limit) for k in range(len(self.steps))])

    def max_profile(self, limit: int) -> np.ndarray:
        """max_k V_k(r), r = 1..limit"""
        r = np.arange(1, limit + 1)
        if not self.steps:
            return np.zeros(limit, dtype=np.int64)
        first = int(self.first_steps.min())
        reach = [first] if first <= self.cap else []
        wide = [s for s in self.steps if s.size >= 2]
        if wide:
            reach.extend(_earliest_steps(wide, self.cap)[1:].tolist())
        return np.searchsorted(np.asarray(reach, dtype=np.int64), r, side="right").astype(np.int64)


def _component_steps(
    levels: np.ndarray,
    members0: np.ndarray,
    clique: bool,
    mis: Optional[tuple[np.ndarray, ...]],
    cap: int,
) -> np.ndarray:
    if clique:
        low = int(levels[members0].min())
        return np.array([low], dtype=np.int64) if low <= cap else _EMPTY
    return _earliest_steps([levels[s] for s in mis], cap)


def precompute_table(rp: ReducedProblem, guard: Optional[int] = None) -> IndNumTable:
    """컴포넌트 분해, 극대 독립집합 캐시, V 계산"""
    graph = rp.sub_graph
    components = connected_components(graph)
    cap = rp.size
    cliques, cache, steps = [], [], []
    for k, members in enumerate(components.members0):
        clique = graph._is_clique0(members)
        mis = None if clique else tuple(component_mis0(graph, members, k, guard))
        cliques.append(clique)
        cache.append(mis)
        steps.append(_component_steps(rp.levels, members, clique, mis, cap))
    first = np.array([s[0] if s.size else cap + 1 for s in steps], dtype=np.int64)
    table = IndNumTable(
        problem=rp,
        components=components,
        is_clique=np.asarray(cliques, dtype=bool),
        mis_cache=tuple(cache),
        levels=rp.levels.copy(),
        steps=tuple(steps),
        totals=np.cumsum(_bincount(steps, cap)),
        first_steps=first,
    )
    logger.debug(
        f"📊 V 테이블: 컴포넌트 {components.n_components}개, "
        f"비클리크 {int((~table.is_clique).sum())}개, r̄={table.r_bar}"
    )
    return table


def apply_mask(t: IndNumTable, masked: Mask) -> IndNumTable:
    """0-based 마스크를 추가 적용 (겹치는 컴포넌트만 다시 계산)"""
    new_nodes = [i for i in masked if i not in t.masked]
    if not new_nodes:
        return t
    cap = t.cap
    levels = t.levels.copy()
    levels[new_nodes] = t.problem.level_of_one
    touched = np.unique(t.components.labels[new_nodes])
    steps = list(t.steps)
    first = t.first_steps.copy()
    old_steps, fresh_steps = [], []
    for k in touched:
        members = t.components.members0[k]
        updated = _component_steps(levels, members, bool(t.is_clique[k]), t.mis_cache[k], cap)
        old_steps.append(steps[k])
        fresh_steps.append(updated)
        steps[k] = updated
        first[k] = updated[0] if updated.size else cap + 1
    delta = _bincount(fresh_steps, cap) - _bincount(old_steps, cap)
    return IndNumTable(
        problem=t.problem,
        components=t.components,
        is_clique=t.is_clique,
        mis_cache=t.mis_cache,
        levels=levels,
        steps=tuple(steps),
        totals=t.totals + np.cumsum(delta),
        first_steps=first,
        masked=t.masked | frozenset(new_nodes),
    )


def update_table(t: IndNumTable, masked: Iterable[int]) -> IndNumTable:
    """원래 id로 지정한 마스크를 적용한 Ṽ"""
    return apply_mask(t, frozenset(int(i) for i in t.problem.local(masked)))
