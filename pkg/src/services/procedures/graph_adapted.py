"""의존성 그래프에 맞춘 절차들의 정의식 (참조) 구현

정확성이 우선이며 작은 m을 가정한다. 고속 경로는 engine 패키지에 있다.
마스크 (1로 치환할 노드 집합)는 내부적으로 0-based frozenset으로 다룬다.
"""

import logging
from typing import Callable, Optional

import numpy as np

from src.services.graph import DependencyGraph, maximal_independent_sets
from src.services.exceptions import InputError
from src.services.procedures.classical import bh_count
from src.services.types import PValueVector, RejectionSet, as_pvalues, check_alpha

logger = logging.getLogger(__name__)

Mask = frozenset[int]
BaseRule = Callable[[np.ndarray], np.ndarray]


def _check_graph(p: np.ndarray, g: DependencyGraph) -> None:
    if g.m != p.size:
        raise InputError(f"그래프 노드 수 {g.m}와 p-value 개수 {p.size}가 다릅니다")


def _masked(p: np.ndarray, masked: Mask) -> np.ndarray:
    q = p.copy()
    if masked:
        q[list(masked)] = 1.0
    return q


def _bh_rule(alpha: float) -> BaseRule:
    def rule(q: np.ndarray) -> np.ndarray:
        r = bh_count(q, alpha)
        if r == 0:
            return np.zeros(q.size, dtype=bool)
        return q <= alpha * r / q.size
    return rule


def _indbh_rule(alpha: float, g: DependencyGraph, guard: Optional[int]) -> BaseRule:
    """극대 독립집합 I마다 𝟏^{I^c} q 에 BH를 적용한 합집합"""
    independent = [np.asarray(s, dtype=np.int64) - 1 for s in maximal_independent_sets(g, guard)]

    def rule(q: np.ndarray) -> np.ndarray:
        out = np.zeros(q.size, dtype=bool)
        for members in independent:
            kept = np.ones(q.size)
            kept[members] = q[members]
            r = bh_count(kept, alpha)
            if r:
                out |= kept <= alpha * r / q.size
        return out
    return rule


class _GapChasing:
    """ℛ^(ℓ+1)(q) = {i : q_i ≤ α|{i} ∪ ℛ^(ℓ)(𝟏^{N_i°} q)|/m} 재귀 (마스크 기준 메모)"""

    def __init__(self, p: np.ndarray, alpha: float, g: DependencyGraph, base: BaseRule):
        self.p = p
        self.alpha = alpha
        self.base = base
        self.punctured = [frozenset(int(j) for j in g._neighbors0(i)) for i in range(p.size)]
        self.memo: dict[tuple[int, Mask], np.ndarray] = {}

    def rejected(self, level: int, masked: Mask = frozenset()) -> np.ndarray:
        key = (level, masked)
        cached = self.memo.get(key)
        if cached is not None:
            return cached
        q = _masked(self.p, masked)
        if level == 1:
            out = self.base(q)
        else:
            m = q.size
            out = np.zeros(m, dtype=bool)
            for i in range(m):
                prev = self.rejected(level - 1, masked | self.punctured[i])
                count = int(prev.sum()) + (0 if prev[i] else 1)
                out[i] = q[i] <= self.alpha * count / m
        self.memo[key] = out
        return out


def naive_adjusted_bh(p: PValueVector, alpha: float, g: DependencyGraph) -> RejectionSet:
    """{i : p_i ≤ α|BH(𝟏^{N_i°} p^{i←0})|/m}: FDR을 보장하지 않는 대조군"""
    p = as_pvalues(p)
    alpha = check_alpha(alpha)
    _check_graph(p, g)
    m = p.size
    rejected, thresholds = [], {}
    for i in range(m):
        q = p.copy()
        q[g._neighbors0(i)] = 1.0
        q[i] = 0.0
        threshold = alpha * bh_count(q, alpha) / m
        if p[i] <= threshold:
            rejected.append(i + 1)
            thresholds[i + 1] = threshold
    return RejectionSet.of(rejected, thresholds)


def indbh_reference(
    p: PValueVector,
    alpha: float,
    g: DependencyGraph,
    guard: Optional[int] = None,
) -> RejectionSet:
    """극대 독립집합에 대한 BH 기각의 합집합"""
    p = as_pvalues(p)
    alpha = check_alpha(alpha)
    _check_graph(p, g)
    return RejectionSet.from_mask(_indbh_rule(alpha, g, guard)(p))


def indbh_k_reference(
    p: PValueVector,
    alpha: float,
    g: DependencyGraph,
    k: int,
    guard: Optional[int] = None,
) -> RejectionSet:
    """IndBH^(k): IndBH에서 출발한 k−1 단계 gap chasing"""
    p = as_pvalues(p)
    alpha = check_alpha(alpha)
    _check_graph(p, g)
    if k < 1:
        raise InputError(f"k는 1 이상이어야 합니다 (현재 {k})")
    chase = _GapChasing(p, alpha, g, _indbh_rule(alpha, g, guard))
    return RejectionSet.from_mask(chase.rejected(k))


def _mask_closure(punctured: list[Mask], m: int) -> list[Mask]:
    """∅ 에서 출발해 A ↦ A ∪ N_i° 로 닿는 모든 마스크 (gap chasing이 참조하는 입력 전체)"""
    seen = {frozenset()}
    frontier = [frozenset()]
    while frontier:
        nxt = []
        for masked in frontier:
            for i in range(m):
                grown = masked | punctured[i]
                if grown not in seen:
                    seen.add(grown)
                    nxt.append(grown)
        frontier = nxt
    return sorted(seen, key=lambda s: (len(s), sorted(s)))


def su_fixed_point(p: PValueVector, alpha: float, g: DependencyGraph) -> RejectionSet:
    """BH에서 출발한 gap chasing의 극한

    단계 ℓ+1의 값은 닿을 수 있는 마스크들에서의 단계 ℓ 값만으로 정해지므로,
    그 마스크 전부에서 한 단계가 변하지 않으면 이후 모든 단계가 같다.
    """
    p = as_pvalues(p)
    alpha = check_alpha(alpha)
    _check_graph(p, g)
    m = p.size
    punctured = [frozenset(int(j) for j in g._neighbors0(i)) for i in range(m)]
    masks = _mask_closure(punctured, m)
    base = _bh_rule(alpha)
    current = {masked: base(_masked(p, masked)) for masked in masks}
    # 각 마스크의 기각 집합은 단계마다 줄어들기만 한다
    max_levels = m * len(masks) + 2
    for level in range(2, max_levels + 1):
        following = {}
        for masked in masks:
            q = _masked(p, masked)
            out = np.zeros(m, dtype=bool)
            for i in range(m):
                prev = current[masked | punctured[i]]
                count = int(prev.sum()) + (0 if prev[i] else 1)
                out[i] = q[i] <= alpha * count / m
            following[masked] = out
        if all(np.array_equal(following[masked], current[masked]) for masked in masks):
            logger.debug(f"SU 고정점 도달: {level - 1}단계, 마스크 {len(masks)}개, 기각 {int(current[frozenset()].sum())}개")
            return RejectionSet.from_mask(current[frozenset()])
        current = following
    raise RuntimeError(f"SU 반복이 {max_levels}단계 안에 수렴하지 않았습니다")
