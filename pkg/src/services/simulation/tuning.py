"""BH 목표 검정력에 맞춘 신호 크기 μ* 조정"""

import logging
from typing import Optional

import numpy as np
from tqdm import tqdm

from src.config import app_config as config
from src.services.exceptions import ParameterError
from src.services.procedures.classical import bh_count
from src.services.simulation.generators import NoiseLayout, draw_layout, layout_pvalues
from src.services.simulation.scenario import SimScenario
from src.services.types import check_alpha

logger = logging.getLogger(__name__)


def bh_power(layouts: list[NoiseLayout], mu_star: float, alpha: float, side: str = "two") -> float:
    """H_1이 비어 있지 않은 반복에 대한 평균 |ℛ^BH ∩ H_1| / |H_1|"""
    fractions = []
    for layout in layouts:
        if not layout.nonnulls0.size:
            continue
        p = layout_pvalues(layout, mu_star, side)
        r = bh_count(p, alpha)
        if r == 0:
            fractions.append(0.0)
            continue
        hits = int((p[layout.nonnulls0] <= alpha * r / p.size).sum())
        fractions.append(hits / layout.nonnulls0.size)
    return float(np.mean(fractions)) if fractions else 0.0


def tune_mu_star(
    scenario: SimScenario,
    tarpow: float,
    alpha: float,
    seed: int = 0,
    reps: Optional[int] = None,
    tolerance: Optional[float] = None,
    max_iter: int = 60,
) -> float:
    """[0, TUNING_MU_MAX] 이분법, 반복 간 공통 난수로 시드에 대해 결정적"""
    alpha = check_alpha(alpha)
    if not 0.0 < tarpow < 1.0:
        raise ParameterError(f"tarpow={tarpow}는 (0, 1) 범위여야 합니다")
    if scenario.dependence not in ("block", "banded"):
        raise ParameterError(f"{scenario.dependence} 시나리오에는 신호가 없습니다")
    reps = config.TUNING_REPS if reps is None else reps
    tolerance = config.TUNING_TOLERANCE if tolerance is None else tolerance

    layouts = [draw_layout(scenario, np.random.default_rng([seed, rep])) for rep in range(reps)]
    if not any(layout.nonnulls0.size for layout in layouts):
        raise ParameterError("조정용 반복에서 비귀무 가설이 생성되지 않았습니다 (π_0 확인)")

    lo, hi = 0.0, config.TUNING_MU_MAX
    top = bh_power(layouts, hi, alpha, scenario.side)
    if top < tarpow - tolerance:
        raise ParameterError(f"μ*={hi}에서도 BH 검정력 {top:.3f} < 목표 {tarpow}: 도달 불가")

    mid = hi
    for _ in tqdm(range(max_iter), desc="μ* 조정", disable=not config.SHOW_PROGRESS, leave=False):
        mid = 0.5 * (lo + hi)
        power = bh_power(layouts, mid, alpha, scenario.side)
        if abs(power - tarpow) <= tolerance:
            break
        if power < tarpow:
            lo = mid
        else:
            hi = mid
    logger.info(f"🎯 μ* 조정 완료: μ*={mid:.4f} (목표 검정력 {tarpow}, {reps}회)")
    return mid
