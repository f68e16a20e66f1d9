"""그래프를 쓰지 않는 고전적 다중검정 절차

임계값은 항상 `alpha * r / m` 순서로 계산한다. 엔진의 레벨 계산도 같은 식을
쓰므로 동점 (p_i == 임계값) 처리까지 비트 단위로 일치한다.
"""

import logging
import math
from functools import lru_cache
from typing import Iterable

import numpy as np

from src.services.exceptions import ParameterError
from src.services.types import PValueVector, RejectionSet, as_node_subset, as_pvalues, check_alpha

logger = logging.getLogger(__name__)


@lru_cache(maxsize=256)
def harmonic_number(n: int) -> float:
    """H_n = Σ_{s=1}^n 1/s (보정 합산)"""
    if n <= 0:
        return 0.0
    return math.fsum((1.0 / np.arange(1, n + 1, dtype=np.float64)).tolist())


def mask(p: PValueVector, nodes: Iterable[int]) -> PValueVector:
    """𝟏^A p: A에 속한 p-value를 1로 바꾼 복사본"""
    p = as_pvalues(p)
    members = as_node_subset(nodes, p.size)
    out = p.copy()
    if members:
        out[np.asarray(members, dtype=np.int64) - 1] = 1.0
    return out


def bh_count(p: np.ndarray, alpha: float) -> int:
    """r* = max{r : p_(r) ≤ αr/m}, 없으면 0 (검증 없음)"""
    m = p.size
    if m == 0:
        return 0
    ranks = np.arange(1, m + 1, dtype=np.float64)
    ok = np.flatnonzero(np.sort(p) <= alpha * ranks / m)
    return int(ok[-1]) + 1 if ok.size else 0


def _threshold_rejections(p: np.ndarray, alpha: float, r: int) -> RejectionSet:
    if r <= 0:
        return RejectionSet()
    threshold = alpha * r / p.size
    rejected = p <= threshold
    return RejectionSet.from_mask(rejected, {int(i) + 1: threshold for i in np.flatnonzero(rejected)})


def bh(p: PValueVector, alpha: float) -> RejectionSet:
    """Benjamini–Hochberg 스텝업"""
    p = as_pvalues(p)
    alpha = check_alpha(alpha)
    return _threshold_rejections(p, alpha, bh_count(p, alpha))


def step_down_bh(p: PValueVector, alpha: float) -> RejectionSet:
    """BH 임계값을 쓰는 스텝다운: 처음 실패하는 순위에서 멈춘다"""
    p = as_pvalues(p)
    alpha = check_alpha(alpha)
    m = p.size
    ranks = np.arange(1, m + 1, dtype=np.float64)
    passed = np.sort(p) <= alpha * ranks / m
    r = m if passed.all() else int(np.argmin(passed))
    return _threshold_rejections(p, alpha, r)


def bonferroni(p: PValueVector, alpha: float) -> RejectionSet:
    p = as_pvalues(p)
    alpha = check_alpha(alpha)
    return _threshold_rejections(p, alpha, 1)


def by(p: PValueVector, alpha: float) -> RejectionSet:
    """Benjamini–Yekutieli: 수준 α / H_m 에서의 BH"""
    p = as_pvalues(p)
    alpha = check_alpha(alpha)
    return bh(p, alpha / harmonic_number(p.size))


def ebh_comparator(p: PValueVector, alpha: float) -> RejectionSet:
    """p′ = min(1, 2√p), α′ = √(2α) 로 변환한 BH"""
    p = as_pvalues(p)
    alpha = check_alpha(alpha)
    if alpha > 0.5:
        raise ParameterError(f"eBH 비교 절차는 alpha ≤ 0.5 에서만 정의됩니다 (현재 {alpha})")
    transformed = np.minimum(1.0, 2.0 * np.sqrt(p))
    return bh(transformed, math.sqrt(2.0 * alpha))
