"""가우시안 / 적대적 p-value 생성기

각 생성기는 (p, H_1, 의존성 그래프)를 돌려주며 같은 시드에서 비트 단위로 동일하다.
dense m×m 분해는 하지 않는다: 블록은 등상관 분해, 띠 구조는 banded Cholesky.
"""

import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Optional

import numpy as np
from scipy import linalg, stats

from src.services.bounds import CliqueCover
from src.services.exceptions import ParameterError
from src.services.graph import BandedGraph, BlockGraph, DependencyGraph, build_graph
from src.services.procedures.classical import harmonic_number
from src.services.simulation.placement import Seed, place_clustered_nonnulls, place_uniform_nonnulls
from src.services.simulation.scenario import SimScenario
from src.services.types import NodeSubset, check_alpha

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SimDraw:
    """한 번의 반복에서 생성된 데이터"""

    p: np.ndarray
    nonnulls: NodeSubset
    graph: DependencyGraph


@dataclass(frozen=True)
class NoiseLayout:
    """μ*와 무관한 난수 부분 (μ* 조정 시 공통 난수로 재사용)"""

    nonnulls0: np.ndarray
    weights: np.ndarray
    noise: np.ndarray


def _block_factor(b: int, rho: float) -> np.ndarray:
    """등상관 블록 공분산 (1−ρ)I + ρ𝟏𝟏ᵀ 의 고유분해 인수 L (LLᵀ = Σ_b)"""
    sigma = (1.0 - rho) * np.eye(b) + rho * np.ones((b, b))
    eigvals, eigvecs = np.linalg.eigh(sigma)
    if eigvals.min() <= 0.0:
        raise ParameterError(f"ρ={rho}, b={b} 블록 공분산이 양의 정부호가 아닙니다")
    return eigvecs * np.sqrt(eigvals)


def block_noise(m: int, b: int, rho: float, rng: np.random.Generator) -> np.ndarray:
    """등상관 블록 N(0, Σ) 표본

    ρ ≥ 0 이면 X_i = √ρ·Z_블록 + √(1−ρ)·ε_i, 음수면 블록 고유분해를 쓴다.
    """
    if m % b:
        raise ParameterError(f"블록 크기 {b}가 m={m}을 나누지 않습니다")
    n_blocks = m // b
    if rho >= 0.0:
        shared = rng.standard_normal(n_blocks)
        eps = rng.standard_normal(m)
        return np.sqrt(rho) * np.repeat(shared, b) + np.sqrt(1.0 - rho) * eps
    factor = _block_factor(b, rho)
    eps = rng.standard_normal((n_blocks, b))
    return (eps @ factor.T).reshape(-1)


def banded_covariance(m: int, bandwidth: int, rho: float) -> np.ndarray:
    """Σ_ij = ρ^|i−j| (|i−j| ≤ ⌊(b′−1)/2⌋), 나머지 0 (검증용 dense 행렬)"""
    h = (bandwidth - 1) // 2
    idx = np.arange(m)
    lag = np.abs(idx[:, None] - idx[None, :])
    return np.where(lag <= h, np.power(float(rho), lag), 0.0)


@lru_cache(maxsize=16)
def banded_factor(m: int, bandwidth: int, rho: float) -> np.ndarray:
    """띠 공분산의 lower banded Cholesky 인수 (cb[d, j] = L[j+d, j])"""
    h = (bandwidth - 1) // 2
    ab = np.zeros((h + 1, m))
    for d in range(h + 1):
        ab[d, : m - d] = rho ** d
    try:
        return linalg.cholesky_banded(ab, lower=True)
    except linalg.LinAlgError:
        raise ParameterError(f"띠 공분산 (m={m}, b′={bandwidth}, ρ={rho})이 양의 정부호가 아닙니다")


def banded_noise(m: int, bandwidth: int, rho: float, rng: np.random.Generator) -> np.ndarray:
    factor = banded_factor(m, bandwidth, float(rho))
    z = rng.standard_normal(m)
    x = np.zeros(m)
    for d in range(factor.shape[0]):
        x[d:] += factor[d, : m - d] * z[: m - d]
    return x


def to_pvalues(x: np.ndarray, side: str = "two") -> np.ndarray:
    """양측 2(1 − Φ(|X|)) 또는 단측 1 − Φ(X)"""
    if side == "two":
        return np.minimum(1.0, 2.0 * stats.norm.sf(np.abs(x)))
    return stats.norm.sf(x)


def scenario_graph(scenario: SimScenario) -> DependencyGraph:
    if scenario.dependence == "banded":
        return BandedGraph.from_bandwidth(scenario.m, scenario.bandwidth)
    return cover_graph(scenario.cover_blocks(), scenario.m)


def cover_graph(blocks: Iterable[Iterable[int]], m: int) -> DependencyGraph:
    """클리크 커버의 블록 그래프 (연속 블록이면 BlockGraph)"""
    cover = CliqueCover.of(blocks, m)
    start = 1
    for block in cover.blocks:
        if block != tuple(range(start, start + len(block))):
            break
        start += len(block)
    else:
        return BlockGraph(cover.sizes)
    edges = [(a, b) for block in cover.blocks for pos, a in enumerate(block) for b in block[pos + 1:]]
    return build_graph(m, edges)


def draw_layout(scenario: SimScenario, seed: Seed = None) -> NoiseLayout:
    """비귀무 위치, 신호 가중치, 상관 잡음을 한 번에 생성"""
    rng = np.random.default_rng(seed)
    m = scenario.m
    if scenario.placement == "clustered":
        nonnulls = place_clustered_nonnulls(m, scenario.pi0, scenario.lambda0, scenario.tau, rng)
    else:
        nonnulls = place_uniform_nonnulls(m, scenario.pi0, rng)
    nonnulls0 = np.asarray(nonnulls, dtype=np.int64) - 1
    if scenario.signal == "random_exp":
        weights = rng.exponential(1.0, size=nonnulls0.size)
    else:
        weights = np.ones(nonnulls0.size)
    if scenario.dependence == "banded":
        noise = banded_noise(m, scenario.bandwidth, scenario.rho, rng)
    else:
        noise = block_noise(m, scenario.block_size, scenario.rho, rng)
    return NoiseLayout(nonnulls0, weights, noise)


def layout_pvalues(layout: NoiseLayout, mu_star: float, side: str = "two") -> np.ndarray:
    x = layout.noise.copy()
    x[layout.nonnulls0] += mu_star * layout.weights
    return to_pvalues(x, side)


def _gaussian(scenario: SimScenario, seed: Seed, mu_star: Optional[float]) -> SimDraw:
    mu = scenario.mu_star if mu_star is None else mu_star
    if mu is None:
        if scenario.pi0 < 1.0:
            raise ParameterError("비귀무 가설이 있으면 mu_star 또는 tarpow가 필요합니다")
        mu = 0.0
    layout = draw_layout(scenario, seed)
    p = layout_pvalues(layout, mu, scenario.side)
    nonnulls = tuple(int(i) + 1 for i in layout.nonnulls0)
    return SimDraw(p, nonnulls, scenario_graph(scenario))


def gen_block_gaussian(scenario: SimScenario, seed: Seed = None, mu_star: Optional[float] = None) -> SimDraw:
    if scenario.dependence != "block":
        raise ParameterError(f"블록 시나리오가 아닙니다: {scenario.dependence}")
    return _gaussian(scenario, seed, mu_star)


def gen_banded_gaussian(scenario: SimScenario, seed: Seed = None, mu_star: Optional[float] = None) -> SimDraw:
    if scenario.dependence != "banded":
        raise ParameterError(f"띠 시나리오가 아닙니다: {scenario.dependence}")
    banded_factor(scenario.m, scenario.bandwidth, float(scenario.rho))
    return _gaussian(scenario, seed, mu_star)


def adversarial_masses(b: int, m: int, alpha: float) -> np.ndarray:
    """ℙ_k: Pr(s) = (αb/m)/s (s = 1..b), Pr(0) = 1 − Σ"""
    s = np.arange(1, b + 1, dtype=np.float64)
    positive = (alpha * b / m) / s
    zero = 1.0 - (alpha * b / m) * harmonic_number(b)
    if zero < -1e-12:
        raise ParameterError(f"alpha={alpha}가 너무 큽니다: 크기 {b} 블록의 Pr(s=0) = {zero:.4g} < 0")
    return np.concatenate([[max(zero, 0.0)], positive])


def gen_block_adversarial(
    m: int,
    cover: Iterable[Iterable[int]],
    alpha: float,
    seed: Seed = None,
    size: Optional[int] = None,
) -> np.ndarray:
    """전역 귀무 하의 적대적 표본기

    블록 k마다 s_k ~ ℙ_k를 뽑고, 무작위 s_k개 가설은 Unif[α(s_k−1)/m, αs_k/m],
    블록의 나머지는 Unif[αb_k/m, 1]. size를 주면 (size, m) 배열을 돌려준다.
    """
    alpha = check_alpha(alpha)
    blocks = CliqueCover.of(cover, m).blocks
    rng = np.random.default_rng(seed)
    reps = 1 if size is None else int(size)
    out = np.empty((reps, m))
    for block in blocks:
        b = len(block)
        idx = np.asarray(block, dtype=np.int64) - 1
        masses = adversarial_masses(b, m, alpha)
        s = rng.choice(b + 1, size=reps, p=masses / masses.sum())
        ranks = np.argsort(rng.random((reps, b)), axis=1).argsort(axis=1)
        chosen = ranks < s[:, None]
        low = np.where(chosen, alpha * (s[:, None] - 1) / m, alpha * b / m)
        high = np.where(chosen, alpha * s[:, None] / m, 1.0)
        out[:, idx] = low + (high - low) * rng.random((reps, b))
    return out[0] if size is None else out


def gen_negative_gaussian(m: int, b: int, rho: float, seed: Seed = None) -> tuple[np.ndarray, DependencyGraph]:
    """음의 등상관 블록, 모두 귀무, 단측 p_i = 1 − Φ(X_i)"""
    low = -1.0 / (b - 1) if b > 1 else -1.0
    if not low < rho < 0.0:
        raise ParameterError(f"음의 상관 ρ={rho}는 ({low:.4g}, 0) 범위여야 합니다 (b={b})")
    rng = np.random.default_rng(seed)
    x = block_noise(m, b, rho, rng)
    return to_pvalues(x, "one"), BlockGraph.equal_blocks(m, b)


def generate(scenario: SimScenario, seed: Seed = None, mu_star: Optional[float] = None) -> SimDraw:
    """시나리오의 의존 구조에 맞는 생성기로 한 번 생성"""
    if scenario.dependence == "block":
        return gen_block_gaussian(scenario, seed, mu_star)
    if scenario.dependence == "banded":
        return gen_banded_gaussian(scenario, seed, mu_star)
    if scenario.dependence == "negative_gaussian":
        p, graph = gen_negative_gaussian(scenario.m, scenario.block_size, scenario.rho, seed)
        return SimDraw(p, (), graph)
    blocks = scenario.cover_blocks()
    p = gen_block_adversarial(scenario.m, blocks, scenario.alpha, seed)
    return SimDraw(p, (), cover_graph(blocks, scenario.m))
