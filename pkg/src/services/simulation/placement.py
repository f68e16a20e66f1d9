"""비귀무 가설 위치 배치 (균등 / 군집 점과정)"""

import csv
import logging
import math
from functools import lru_cache
from pathlib import Path
from typing import Optional, Union

import numpy as np
from scipy import stats

from src.config import app_config as config
from src.services.exceptions import ParameterError

logger = logging.getLogger(__name__)

Seed = Union[int, np.random.Generator, None]


def place_uniform_nonnulls(m: int, pi0: float, seed: Seed = None) -> tuple[int, ...]:
    """round((1−π_0)m)개의 위치를 비복원 균등 추출"""
    rng = np.random.default_rng(seed)
    count = int(round((1.0 - pi0) * m))
    if count <= 0:
        return ()
    chosen = rng.choice(m, size=count, replace=False)
    return tuple(sorted(int(i) + 1 for i in chosen))


@lru_cache(maxsize=64)
def discrete_gaussian_offsets(tau: float) -> tuple[np.ndarray, np.ndarray]:
    """정수 오프셋 d와 확률 ∝ exp(−d²/2τ²), |d| ≤ ⌈GAUSS_TRUNCATION·τ⌉ 에서 절단"""
    width = max(1, math.ceil(config.GAUSS_TRUNCATION * tau))
    support = np.arange(-width, width + 1)
    weights = np.exp(-(support.astype(np.float64) ** 2) / (2.0 * tau * tau))
    return support, weights / weights.sum()


def _cluster_points(m: int, pi0: float, lambda0: float, tau: float, rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
    """중심 (0-based)과 절단 전 자식 위치"""
    eta0 = (1.0 - pi0) * m / lambda0
    n_centers = int(stats.poisson(eta0).rvs(random_state=rng)) if eta0 > 0 else 0
    centers = rng.integers(0, m, size=n_centers)
    if not n_centers:
        return centers, np.empty(0, dtype=np.int64)
    daughters = stats.poisson(lambda0).rvs(size=n_centers, random_state=rng)
    support, probs = discrete_gaussian_offsets(float(tau))
    offsets = rng.choice(support, size=int(daughters.sum()), p=probs)
    return centers, np.repeat(centers, daughters) + offsets


def place_clustered_nonnulls(
    m: int,
    pi0: float,
    lambda0: float,
    tau: float,
    seed: Seed = None,
) -> tuple[int, ...]:
    """군집 점과정 배치: 중심 수 ~ Poisson(η_0), η_0 = (1−π_0)m/λ_0, 중심당 Poisson(λ_0)개

    자식은 이산 가우시안 오프셋에 놓이며 중복 제거 후 {1..m} 밖은 버린다.
    """
    if lambda0 <= 0 or tau <= 0:
        raise ParameterError(f"λ_0={lambda0}, τ={tau}는 양수여야 합니다")
    if not 0.0 <= pi0 <= 1.0:
        raise ParameterError(f"π_0={pi0}는 [0, 1] 범위여야 합니다")
    rng = np.random.default_rng(seed)
    _, points = _cluster_points(m, pi0, lambda0, tau, rng)
    points = points[(points >= 0) & (points < m)]
    return tuple(int(i) + 1 for i in np.unique(points))


def export_cluster_rug(
    m: int,
    pi0: float,
    lambda0: float,
    tau: float,
    seed: Seed = None,
    path: Optional[Union[str, Path]] = None,
) -> list[tuple[int, str]]:
    """러그 플롯용 (위치, 종류) 목록, 종류는 center 또는 nonnull"""
    rng = np.random.default_rng(seed)
    centers, points = _cluster_points(m, pi0, lambda0, tau, rng)
    points = np.unique(points[(points >= 0) & (points < m)])
    rows = [(int(c) + 1, "center") for c in np.unique(centers)]
    rows += [(int(i) + 1, "nonnull") for i in points]
    rows.sort()
    if path is not None:
        with open(path, "w", newline="", encoding="utf-8") as f:
            writer = csv.writer(f, lineterminator="\n")
            writer.writerow(["position", "kind"])
            writer.writerows(rows)
        logger.info(f"📍 러그 데이터 저장: {path} ({len(rows)}행)")
    return rows
