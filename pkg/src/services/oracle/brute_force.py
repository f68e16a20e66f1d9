"""전수 열거 기반 참조 계산 (작은 m 전용)

IndBH는 인증 집합 정의로 계산한다: 독립집합 C ∋ i 가 존재해서 C의 모든 j에
대해 p_j ≤ α|C|/m 이면 i를 기각한다.
"""

import logging
from typing import Iterator, Optional

import numpy as np

from src.config import app_config as config
from src.services.exceptions import GraphSizeError, InputError
from src.services.graph import DependencyGraph
from src.services.types import PValueVector, RejectionSet, as_pvalues, check_alpha

logger = logging.getLogger(__name__)


def _independent_subsets(candidates: list[int], adjacency: list[frozenset[int]]) -> Iterator[list[int]]:
    """candidates (0-based, 정렬)에서 만들 수 있는 모든 비어 있지 않은 독립집합"""

    def extend(chosen: list[int], start: int) -> Iterator[list[int]]:
        for pos in range(start, len(candidates)):
            v = candidates[pos]
            if any(v in adjacency[c] for c in chosen):
                continue
            chosen.append(v)
            yield list(chosen)
            yield from extend(chosen, pos + 1)
            chosen.pop()

    yield from extend([], 0)


def _certified(q: np.ndarray, alpha: float, adjacency: list[frozenset[int]]) -> np.ndarray:
    m = q.size
    out = np.zeros(m, dtype=bool)
    # |C| ≤ m 이므로 q_j > α 인 노드는 어떤 인증 집합에도 들어가지 못한다
    candidates = [int(j) for j in np.flatnonzero(q <= alpha)]
    for subset in _independent_subsets(candidates, adjacency):
        if q[subset].max() <= alpha * len(subset) / m:
            out[subset] = True
    return out


def _adjacency(g: DependencyGraph) -> list[frozenset[int]]:
    return [frozenset(int(j) for j in g._neighbors0(i)) for i in range(g.m)]


def _check(p: np.ndarray, g: DependencyGraph, guard: Optional[int]) -> None:
    if g.m != p.size:
        raise InputError(f"그래프 노드 수 {g.m}와 p-value 개수 {p.size}가 다릅니다")
    guard = config.ORACLE_NODE_GUARD if guard is None else guard
    if p.size > guard:
        raise GraphSizeError(1, p.size, guard)


def brute_force_indbh(
    p: PValueVector,
    alpha: float,
    g: DependencyGraph,
    guard: Optional[int] = None,
) -> RejectionSet:
    p = as_pvalues(p)
    alpha = check_alpha(alpha)
    _check(p, g, guard)
    return RejectionSet.from_mask(_certified(p, alpha, _adjacency(g)))


def brute_force_indbh_k(
    p: PValueVector,
    alpha: float,
    g: DependencyGraph,
    k: int,
    guard: Optional[int] = None,
) -> RejectionSet:
    """인증 집합 기반 1단계 + 정의식 그대로의 gap chasing"""
    p = as_pvalues(p)
    alpha = check_alpha(alpha)
    _check(p, g, guard)
    if k < 1:
        raise InputError(f"k는 1 이상이어야 합니다 (현재 {k})")
    adjacency = _adjacency(g)
    m = p.size
    memo: dict[tuple[int, frozenset[int]], frozenset[int]] = {}

    def rejected(level: int, masked: frozenset[int]) -> frozenset[int]:
        key = (level, masked)
        if key in memo:
            return memo[key]
        q = p.copy()
        q[list(masked)] = 1.0
        if level == 1:
            out = frozenset(np.flatnonzero(_certified(q, alpha, adjacency)).tolist())
        else:
            out = frozenset(
                i for i in range(m)
                if q[i] <= alpha * len(rejected(level - 1, masked | adjacency[i]) | {i}) / m
            )
        memo[key] = out
        return out

    return RejectionSet.of(i + 1 for i in rejected(k, frozenset()))


def interval_procedure(p: PValueVector, alpha: float, g: Optional[DependencyGraph] = None) -> RejectionSet:
    """α/m ≤ p_i ≤ 2α/m 이면 기각하는 비단조 장난감 절차 (검사기 자체 점검용)"""
    p = as_pvalues(p)
    alpha = check_alpha(alpha)
    m = p.size
    return RejectionSet.from_mask((p >= alpha / m) & (p <= 2 * alpha / m))
