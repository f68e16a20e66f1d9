"""무작위 가지치기 (self-consistency 복원)"""

import logging
from typing import Optional

import numpy as np

from src.services.exceptions import InputError
from src.services.graph import DependencyGraph
from src.services.procedures.spec import ProcedureSpec
from src.services.types import PValueVector, RejectionSet, as_pvalues, check_alpha

logger = logging.getLogger(__name__)


def adjusted_counts(p: np.ndarray, alpha: float, g: DependencyGraph, inner: ProcedureSpec) -> np.ndarray:
    """c_i = |{i} ∪ ℛ^init(𝟏^{N_i°} p)|"""
    from src.services.procedures.registry import run_procedure

    m = p.size
    counts = np.zeros(m, dtype=np.int64)
    cache: dict[bytes, frozenset[int]] = {}
    for i in range(m):
        q = p.copy()
        q[g._neighbors0(i)] = 1.0
        key = q.tobytes()
        if key not in cache:
            cache[key] = run_procedure(inner, q, g, alpha=alpha).as_set()
        counts[i] = len(cache[key] | {i + 1})
    return counts


def randomized_prune(
    p: PValueVector,
    alpha: float,
    g: DependencyGraph,
    inner: ProcedureSpec,
    u: np.ndarray,
) -> RejectionSet:
    """ℛ^adj 위에서 ũ_i = u_i c_i/m 에 수준 1의 BH를 적용

    ℛ^adj 밖의 ũ_i는 +∞ 이므로 절대 기각되지 않는다.
    """
    p = as_pvalues(p)
    alpha = check_alpha(alpha)
    u = np.asarray(u, dtype=np.float64).reshape(-1)
    m = p.size
    if u.size != m:
        raise InputError(f"균등 난수 개수 {u.size}가 p-value 개수 {m}와 다릅니다")
    if np.any((u < 0.0) | (u > 1.0)):
        raise InputError("균등 난수는 [0, 1] 범위여야 합니다")
    counts = adjusted_counts(p, alpha, g, inner)
    adjusted = p <= alpha * counts / m
    if not adjusted.any():
        return RejectionSet()
    scores = np.where(adjusted, u * counts / m, np.inf)
    ranks = np.arange(1, m + 1, dtype=np.float64)
    ok = np.flatnonzero(np.sort(scores) <= ranks / m)
    if not ok.size:
        return RejectionSet()
    r = int(ok[-1]) + 1
    pruned = int(adjusted.sum()) - int((scores <= r / m).sum())
    if pruned:
        logger.debug(f"✂️ 무작위 가지치기: {pruned}개 제거")
    return RejectionSet.from_mask(scores <= r / m)


def randomized_prune_seeded(
    p: PValueVector,
    alpha: float,
    g: DependencyGraph,
    inner: ProcedureSpec,
    seed: Optional[int] = None,
) -> RejectionSet:
    """시드 고정 난수로 u를 뽑는 편의 함수"""
    p = as_pvalues(p)
    u = np.random.default_rng(seed).uniform(size=p.size)
    return randomized_prune(p, alpha, g, inner, u)
