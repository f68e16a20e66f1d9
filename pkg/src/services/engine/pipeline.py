"""고속 IndBH / IndBH^(k) 파이프라인

reduce → precompute → 저비용 판정 → 미결정 가설만 정확 계산. k ≥ 2 에서는
ℛ^(ℓ−1) ∪ ℛ^(ℓ)* (컴포넌트를 클리크로 완화한 부분집합)에 속하면 기각,
q_i > α(1 + |ℛ^(ℓ−1)|)/m 이면 비기각, 나머지만 N_i를 마스킹한 재귀로 판정한다.
"""

import logging
import threading
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional

import numpy as np
from cachetools import LRUCache

from src.config import app_config as config
from src.services.exceptions import InputError
from src.services.graph import DependencyGraph
from src.services.engine.checks import classify, exact_bound
from src.services.engine.reduction import reduce_to_bh
from src.services.engine.table import IndNumTable, apply_mask, precompute_table
from src.services.procedures.classical import bh_count
from src.services.types import PValueVector, RejectionSet, as_node_subset, as_pvalues, check_alpha

logger = logging.getLogger(__name__)

Mask = frozenset[int]
_NONE: frozenset[int] = frozenset()


@dataclass
class EngineStats:
    """실행 통계 (진단용)"""

    kept: int = 0
    components: int = 0
    exact_calls: int = 0
    recursive_calls: int = 0
    memo_hits: int = 0
    seconds: float = 0.0


@dataclass(frozen=True)
class EngineRun:
    rejections: RejectionSet
    stats: EngineStats = field(compare=False)


def clique_shortcut(p: PValueVector, alpha: float, blocks: Iterable[Iterable[int]]) -> RejectionSet:
    """블록 의존성에서의 IndBH: 블록별 최소 p만 남긴 BH의 기각 수로 임계값 결정"""
    p = as_pvalues(p)
    alpha = check_alpha(alpha)
    m = p.size
    parts = [as_node_subset(b, m) for b in blocks]
    seen = [i for part in parts for i in part]
    if any(not part for part in parts) or len(seen) != len(set(seen)) or set(seen) != set(range(1, m + 1)):
        raise InputError("블록들이 {1..m}의 분할이 아닙니다")
    kept = np.ones(m)
    for part in parts:
        idx = np.asarray(part, dtype=np.int64) - 1
        j = idx[int(np.argmin(p[idx]))]
        kept[j] = p[j]
    r = bh_count(kept, alpha)
    if r == 0:
        return RejectionSet()
    threshold = alpha * r / m
    rejected = p <= threshold
    return RejectionSet.from_mask(rejected, {int(i) + 1: threshold for i in np.flatnonzero(rejected)})


class _Recursion:
    """마스크 기준 메모를 가진 ℛ^(ℓ)(𝟏^A p) 계산기 (0-based 축소 인덱스)"""

    def __init__(self, table: IndNumTable, stats: EngineStats):
        self.table = table
        self.stats = stats
        self.problem = table.problem
        self.cap = table.cap
        self.level_of_one = self.problem.level_of_one
        graph = self.problem.sub_graph
        self.closed = [frozenset(graph._neighbors0(i).tolist()) | {i} for i in range(self.cap)]
        self.blocks = [frozenset(nodes.tolist()) for nodes in table.components.members0]
        self.labels = table.components.labels
        self.all_cliques = bool(table.is_clique.all())
        # 캐시는 최상위 호출 하나에만 속한다
        self.memo: LRUCache = LRUCache(maxsize=config.MEMO_CACHE_SIZE)
        self.lock = threading.RLock()

    def _memoized(self, key: tuple, compute: Callable[[], Mask]) -> Mask:
        with self.lock:
            hit = self.memo.get(key)
            if hit is not None:
                self.stats.memo_hits += 1
                return hit
        value = compute()
        with self.lock:
            self.memo[key] = value
        return value

    def _levels(self, masked: Mask) -> np.ndarray:
        if not masked:
            return self.table.levels
        levels = self.table.levels.copy()
        levels[list(masked)] = self.level_of_one
        return levels

    def _map(self, fn: Callable[[int], bool], items: list[int], pool: Optional[ThreadPoolExecutor]) -> list[bool]:
        if pool is None or len(items) < 2:
            return [fn(i) for i in items]
        return list(pool.map(fn, items))

    # ---- ℓ = 1 -----------------------------------------------------------
    def base(self, masked: Mask, pool: Optional[ThreadPoolExecutor] = None) -> Mask:
        return self._memoized(("base", masked), lambda: self._base(masked, pool))

    def _base(self, masked: Mask, pool: Optional[ThreadPoolExecutor]) -> Mask:
        table = apply_mask(self.table, masked)
        reject, undecided, _ = classify(table)
        pending = np.flatnonzero(undecided).tolist()
        if pending:
            with self.lock:
                self.stats.exact_calls += len(pending)
            levels = table.levels
            verdicts = self._map(lambda i: bool(levels[i] <= exact_bound(table, i)), pending, pool)
            for i, ok in zip(pending, verdicts):
                reject[i] = ok
        return frozenset(np.flatnonzero(reject).tolist())

    # ---- 클리크 완화 ---------------------------------------------------------
    def star(self, level: int, masked: Mask) -> Mask:
        return self._memoized(("star", level, masked), lambda: self._star(level, masked))

    def _star(self, level: int, masked: Mask) -> Mask:
        levels = self._levels(masked)
        if level == 1:
            lows = np.full(len(self.blocks), self.cap + 1, dtype=np.int64)
            np.minimum.at(lows, self.labels, levels)
            counts = np.bincount(lows[lows <= self.cap], minlength=self.cap + 1)
            hits = np.flatnonzero(np.cumsum(counts)[1:] >= np.arange(1, self.cap + 1))
            r = int(hits[-1]) + 1 if hits.size else 0
            return frozenset(np.flatnonzero(levels <= r).tolist()) if r else _NONE
        previous = self.star(level - 1, masked)
        limit = 1 + len(previous)
        accepted = set(previous)
        pending = [i for i in np.flatnonzero(levels <= limit).tolist() if i not in previous]
        by_block: dict[int, list[int]] = {}
        for i in pending:
            by_block.setdefault(int(self.labels[i]), []).append(i)
        for k, members in sorted(by_block.items()):
            self.stats.recursive_calls += 1
            sub = self.star(level - 1, masked | self.blocks[k])
            for i in members:
                if levels[i] <= len(sub | {i}):
                    accepted.add(i)
        return frozenset(accepted)

    # ---- ℓ ≥ 1 -------------------------------------------------------------
    def rejected(self, level: int, masked: Mask = _NONE, pool: Optional[ThreadPoolExecutor] = None) -> Mask:
        if level == 1:
            return self.base(masked, pool)
        if self.all_cliques:
            return self.star(level, masked)
        return self._memoized(("full", level, masked), lambda: self._rejected(level, masked, pool))

    def _rejected(self, level: int, masked: Mask, pool: Optional[ThreadPoolExecutor]) -> Mask:
        previous = self.rejected(level - 1, masked)
        accepted = set(previous) | self.star(level, masked)
        levels = self._levels(masked)
        limit = 1 + len(previous)
        pending = [i for i in np.flatnonzero(levels <= limit).tolist() if i not in accepted]

        def decide(i: int) -> bool:
            with self.lock:
                self.stats.recursive_calls += 1
            sub = self.rejected(level - 1, masked | self.closed[i])
            return bool(levels[i] <= len(sub | {i}))

        for i, ok in zip(pending, self._map(decide, pending, pool)):
            if ok:
                accepted.add(i)
        return frozenset(accepted)


def run_indbh_k(
    p: PValueVector,
    alpha: float,
    g: DependencyGraph,
    k: int = 1,
    threads: Optional[int] = None,
    guard: Optional[int] = None,
    r_bar: Optional[int] = None,
) -> EngineRun:
    """IndBH^(k) 고속 계산과 실행 통계

    r_bar를 주면 |ℛ^BH| 대신 그 값으로 축소한다 (결과는 같아야 한다).
    """
    started = time.perf_counter()
    if k < 1:
        raise InputError(f"k는 1 이상이어야 합니다 (현재 {k})")
    threads = config.ENGINE_THREADS if threads is None else threads
    rp = reduce_to_bh(p, alpha, g, r_bar)
    stats = EngineStats(kept=rp.size)
    if rp.size == 0:
        stats.seconds = time.perf_counter() - started
        return EngineRun(RejectionSet(), stats)
    table = precompute_table(rp, guard)
    stats.components = table.components.n_components
    recursion = _Recursion(table, stats)
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            local = recursion.rejected(k, pool=pool)
    else:
        local = recursion.rejected(k)
    stats.seconds = time.perf_counter() - started
    logger.debug(
        f"⚡ IndBH^({k}) 완료: kept={stats.kept}, 기각={len(local)}, "
        f"정확계산={stats.exact_calls}, 재귀={stats.recursive_calls}, {stats.seconds:.3f}s"
    )
    return EngineRun(RejectionSet.of(rp.to_original(local)), stats)


def indbh_fast(
    p: PValueVector,
    alpha: float,
    g: DependencyGraph,
    threads: Optional[int] = None,
    guard: Optional[int] = None,
    r_bar: Optional[int] = None,
) -> RejectionSet:
    return run_indbh_k(p, alpha, g, 1, threads, guard, r_bar).rejections


def indbh_k_fast(
    p: PValueVector,
    alpha: float,
    g: DependencyGraph,
    k: int,
    threads: Optional[int] = None,
    guard: Optional[int] = None,
    r_bar: Optional[int] = None,
) -> RejectionSet:
    return run_indbh_k(p, alpha, g, k, threads, guard, r_bar).rejections
