"""BH 기각 집합으로의 문제 축소와 기각 레벨 계산"""

import logging
from dataclasses import dataclass
from typing import Iterable, Optional

import numpy as np

from src.services.exceptions import InputError, ParameterError
from src.services.graph import DependencyGraph
from src.services.procedures.classical import bh_count
from src.services.types import NodeSubset, PValueVector, as_pvalues, check_alpha

logger = logging.getLogger(__name__)


def rejection_levels(p: np.ndarray, alpha: float, m: int, cap: int) -> np.ndarray:
    """r_i = min{r ∈ 1..cap : p_i ≤ αr/m}, 해당 r이 없으면 cap + 1

    올림 근사 후 비교식 `p ≤ alpha * r / m` 으로 보정한다.
    """
    p = np.asarray(p, dtype=np.float64)
    if p.size == 0:
        return np.zeros(0, dtype=np.int64)
    if alpha == 0.0:
        return np.where((p == 0.0) & (cap >= 1), 1, cap + 1).astype(np.int64)
    with np.errstate(over="ignore", invalid="ignore"):
        approx = np.ceil(p * m / alpha)
    r = np.clip(np.nan_to_num(approx, nan=cap + 1.0, posinf=cap + 1.0), 1, cap + 1).astype(np.int64)
    while True:
        down = (r > 1) & (p <= alpha * (r - 1) / m)
        r[down] -= 1
        up = (r <= cap) & (p > alpha * r / m)
        r[up] += 1
        if not down.any() and not up.any():
            return r


@dataclass(frozen=True)
class ReducedProblem:
    """Q(r̄)로 축소한 문제

    임계값은 원래 (alpha, m)으로 계산한다. alpha_adj·r/|kept| 와 수학적으로
    같지만 부동소수점 결과를 참조 구현과 일치시키기 위함이다.
    """

    kept: NodeSubset
    sub_p: np.ndarray
    sub_graph: DependencyGraph
    alpha: float
    m: int
    r_bar: int
    levels: np.ndarray

    @property
    def size(self) -> int:
        return len(self.kept)

    @property
    def alpha_adj(self) -> float:
        return self.alpha * self.size / self.m

    @property
    def id_map(self) -> dict[int, int]:
        """축소 id (1-based) → 원래 id"""
        return {new + 1: old for new, old in enumerate(self.kept)}

    @property
    def level_of_one(self) -> int:
        """p = 1 (마스킹된 노드)의 레벨"""
        return int(rejection_levels(np.ones(1), self.alpha, self.m, self.size)[0])

    def local(self, ids: Iterable[int]) -> np.ndarray:
        """원래 id → 0-based 축소 인덱스"""
        kept = np.asarray(self.kept, dtype=np.int64)
        ids = np.asarray(sorted({int(i) for i in ids}), dtype=np.int64)
        pos = np.searchsorted(kept, ids)
        ok = pos < kept.size
        ok[ok] = kept[pos[ok]] == ids[ok]
        if not np.all(ok):
            raise InputError(f"축소 문제에 없는 노드 id: {ids[~ok].tolist()}")
        return pos.astype(np.int64)

    def to_original(self, local0: Iterable[int]) -> NodeSubset:
        return tuple(sorted(self.kept[int(i)] for i in local0))


def reduce_to_bh(
    p: PValueVector,
    alpha: float,
    g: DependencyGraph,
    r_bar: Optional[int] = None,
) -> ReducedProblem:
    """kept = Q(r̄) = {j : p_j ≤ αr̄/m}, r̄ 기본값은 |ℛ^BH|"""
    p = as_pvalues(p)
    alpha = check_alpha(alpha)
    if g.m != p.size:
        raise InputError(f"그래프 노드 수 {g.m}와 p-value 개수 {p.size}가 다릅니다")
    m = p.size
    r_star = bh_count(p, alpha)
    if r_bar is None:
        r_bar = r_star
    elif r_bar < r_star or r_bar > m:
        raise ParameterError(f"r̄={r_bar}는 |ℛ^BH|={r_star} 이상 m={m} 이하여야 합니다")
    kept0 = np.flatnonzero(p <= alpha * r_bar / m) if r_bar > 0 else np.zeros(0, dtype=np.int64)
    sub_p = p[kept0]
    logger.debug(f"✂️ BH 축소: m={m} → {kept0.size}개 (r̄={r_bar})")
    return ReducedProblem(
        kept=tuple(int(i) + 1 for i in kept0),
        sub_p=sub_p,
        sub_graph=g._induced0(kept0),
        alpha=alpha,
        m=m,
        r_bar=int(r_bar),
        levels=rejection_levels(sub_p, alpha, m, int(kept0.size)),
    )
