"""의존성 그래프 하에서 BH의 최악 FDR 상/하한과 그래프 보정 수준"""

import logging
import math
from dataclasses import dataclass
from typing import Iterable, Optional

import numpy as np
from pydantic import BaseModel, Field
from scipy import optimize

from src.services.exceptions import InputError, ParameterError
from src.services.graph import DependencyGraph, connected_components
from src.services.procedures.classical import bh, harmonic_number
from src.services.types import NodeSubset, PValueVector, RejectionSet, as_node_subset, as_pvalues, check_alpha

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CliqueCover:
    """{1..m}을 분할하는 클리크들"""

    m: int
    blocks: tuple[NodeSubset, ...]

    @classmethod
    def of(cls, blocks: Iterable[Iterable[int]], m: int, g: Optional[DependencyGraph] = None) -> "CliqueCover":
        parts = tuple(as_node_subset(b, m) for b in blocks)
        seen = [i for part in parts for i in part]
        if any(not part for part in parts) or len(seen) != len(set(seen)) or len(seen) != m:
            raise InputError("클리크 커버가 {1..m}의 분할이 아닙니다")
        if g is not None:
            for k, part in enumerate(parts, start=1):
                for a_pos, a in enumerate(part):
                    for b in part[a_pos + 1:]:
                        if not g.has_edge(a, b):
                            raise InputError(f"블록 {k}의 ({a}, {b})가 그래프에서 인접하지 않습니다")
        return cls(m, tuple(sorted(parts)))

    @classmethod
    def equal_blocks(cls, m: int, b: int) -> "CliqueCover":
        if not 1 <= b <= m:
            raise ParameterError(f"블록 크기 b={b}는 1..m={m} 범위여야 합니다")
        return cls.of([range(start, min(start + b, m + 1)) for start in range(1, m + 1, b)], m)

    @property
    def sizes(self) -> list[int]:
        return [len(b) for b in self.blocks]


class BoundResult(BaseModel):
    """그래프와 수준에 대한 FDR 한계 요약"""

    alpha: float = Field(..., description="유의수준")
    m: int = Field(..., description="가설 수")
    n_edges: int = Field(..., description="엣지 수")
    max_degree: int = Field(..., description="최대 차수")
    lower: Optional[float] = Field(None, description="클리크 커버 기반 최악 FDR 하한")
    upper: float = Field(..., description="최악 FDR 상한 (1을 넘으면 무의미)")
    by_level: float = Field(..., description="BY 보정 수준 α/H_m")
    bygraph_level: Optional[float] = Field(None, description="동일 블록 크기에 대한 BYgraph 수준")


def greedy_clique_cover(g: DependencyGraph) -> CliqueCover:
    """컴포넌트별 탐욕 클리크 커버 (클리크 컴포넌트는 그대로 한 블록)"""
    blocks: list[NodeSubset] = []
    for nodes in connected_components(g).members0:
        if g._is_clique0(nodes):
            blocks.append(tuple(int(v) + 1 for v in nodes))
            continue
        remaining = [int(v) for v in nodes]
        while remaining:
            current = [remaining.pop(0)]
            for v in list(remaining):
                if all(g.has_edge(v + 1, c + 1) for c in current):
                    current.append(v)
                    remaining.remove(v)
            blocks.append(tuple(sorted(c + 1 for c in current)))
    return CliqueCover.of(blocks, g.m)


def fdr_upper_bound(g: DependencyGraph, alpha: float) -> float:
    """α·(1/m)·Σ_i L_i, L_i = |N_i| − (|N_i| − 1)·m^{−1/(|N_i|−1)} (|N_i| = 1 이면 1)"""
    alpha = check_alpha(alpha)
    m = g.m
    n = g.degrees().astype(np.float64) + 1.0
    safe = np.where(n > 1.0, n - 1.0, 1.0)
    terms = np.where(n > 1.0, n - (n - 1.0) * np.power(float(m), -1.0 / safe), 1.0)
    return alpha * float(math.fsum(terms.tolist())) / m


def fdr_lower_bound(cover: CliqueCover, m: int, alpha: float) -> float:
    """1 − Π_k (1 − (α b_k/m) H_{b_k})"""
    alpha = check_alpha(alpha)
    if cover.m != m:
        raise InputError(f"커버의 노드 수 {cover.m}와 m={m}이 다릅니다")
    product = 1.0
    for k, size in enumerate(cover.sizes, start=1):
        factor = 1.0 - (alpha * size / m) * harmonic_number(size)
        if factor <= 0.0:
            raise ParameterError(
                f"alpha={alpha}가 너무 큽니다: 블록 {k} (크기 {size}, 첫 노드 {cover.blocks[k - 1][0]})의 인수가 {factor:.4g}"
            )
        product *= factor
    return 1.0 - product


def by_level(m: int, alpha: float) -> float:
    return check_alpha(alpha) / harmonic_number(m)


def bygraph_level(m: int, b: int, alpha: float) -> float:
    """sup{a : 1 − (1 − (ab/m)H_b)^{m/b} ≤ α} = m(1 − (1−α)^{b/m}) / (b·H_b)"""
    alpha = check_alpha(alpha)
    if not 1 <= b <= m:
        raise ParameterError(f"블록 크기 b={b}는 1..m={m} 범위여야 합니다")
    if alpha == 1.0:
        return m / (b * harmonic_number(b))
    return m * -math.expm1((b / m) * math.log1p(-alpha)) / (b * harmonic_number(b))


def bygraph_level_numeric(m: int, b: int, alpha: float, tol: float = 1e-15) -> float:
    """수치 근 찾기로 구한 같은 상한 (닫힌 형식 검증용)"""
    alpha = check_alpha(alpha)
    if not 1 <= b <= m:
        raise ParameterError(f"블록 크기 b={b}는 1..m={m} 범위여야 합니다")
    h = harmonic_number(b)

    def excess(a: float) -> float:
        return 1.0 - max(0.0, 1.0 - a * b * h / m) ** (m / b) - alpha

    return float(optimize.brentq(excess, 0.0, m / (b * h), xtol=tol))


def bygraph(p: PValueVector, alpha: float, block_size: int) -> RejectionSet:
    """BYgraph 비교 절차: bygraph_level 수준의 BH"""
    p = as_pvalues(p)
    return bh(p, bygraph_level(p.size, block_size, alpha))


def summarize_bounds(
    g: DependencyGraph,
    alpha: float,
    cover: Optional[CliqueCover] = None,
    block_size: Optional[int] = None,
) -> BoundResult:
    """cmd_bounds / HTTP 응답용 요약"""
    alpha = check_alpha(alpha)
    cover = cover or greedy_clique_cover(g)
    try:
        lower = fdr_lower_bound(cover, g.m, alpha)
    except ParameterError as e:
        logger.warning(f"⚠️ 하한 계산 불가: {e}")
        lower = None
    degrees = g.degrees()
    return BoundResult(
        alpha=alpha,
        m=g.m,
        n_edges=g.n_edges,
        max_degree=int(degrees.max()) if degrees.size else 0,
        lower=lower,
        upper=fdr_upper_bound(g, alpha),
        by_level=by_level(g.m, alpha),
        bygraph_level=bygraph_level(g.m, block_size, alpha) if block_size else None,
    )
