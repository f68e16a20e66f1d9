"""반복 병렬 시뮬레이션 실행기

반복 rep의 난수 스트림은 default_rng([seed, rep]) 로 독립이며, 결과 순서는
스레드 수와 무관하다.
"""

import logging
import time
from concurrent.futures import ThreadPoolExecutor
from typing import Optional

import numpy as np
from tqdm import tqdm

from src.config import app_config as config
from src.services.exceptions import ParameterError
from src.services.procedures.classical import bh
from src.services.procedures.registry import run_procedure
from src.services.procedures.spec import ProcedureSpec
from src.services.simulation.generators import generate
from src.services.simulation.metrics import RepRecord, compute_metrics
from src.services.simulation.scenario import MetricSet, SimScenario
from src.services.simulation.tuning import tune_mu_star

logger = logging.getLogger(__name__)


def resolve_mu_star(scenario: SimScenario, seed: int) -> Optional[float]:
    """mu_star가 없고 tarpow가 있으면 조정해서 채운다"""
    if scenario.mu_star is not None or not scenario.has_signal:
        return scenario.mu_star
    if scenario.tarpow is None:
        raise ParameterError("비귀무 가설이 있는 시나리오에는 mu_star 또는 tarpow가 필요합니다")
    return tune_mu_star(scenario, scenario.tarpow, scenario.alpha, seed)


def run_replication(
    scenario: SimScenario,
    methods: list[ProcedureSpec],
    seed: int,
    rep: int,
    mu_star: Optional[float] = None,
) -> RepRecord:
    draw = generate(scenario, np.random.default_rng([seed, rep]), mu_star)
    rejections = {
        spec.label: run_procedure(spec, draw.p, draw.graph, seed=seed * 1_000_003 + rep).as_set()
        for spec in methods
    }
    return RepRecord(
        m=scenario.m,
        nonnulls=frozenset(draw.nonnulls),
        bh=bh(draw.p, scenario.alpha).as_set(),
        rejections=rejections,
    )


def run_simulation(
    scenario: SimScenario,
    methods: list[ProcedureSpec],
    reps: int,
    seed: int = 0,
    threads: int = 1,
) -> list[RepRecord]:
    """reps번 생성 후 모든 방법 적용"""
    if reps < 1:
        raise ParameterError(f"반복 수는 1 이상이어야 합니다 (현재 {reps})")
    if not methods:
        raise ParameterError("적어도 하나의 방법이 필요합니다")
    started = time.perf_counter()
    mu_star = resolve_mu_star(scenario, seed)

    def one(rep: int) -> RepRecord:
        return run_replication(scenario, methods, seed, rep, mu_star)

    progress = dict(total=reps, desc="시뮬레이션", disable=not config.SHOW_PROGRESS, leave=False)
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            records = list(tqdm(pool.map(one, range(reps)), **progress))
    else:
        records = [one(rep) for rep in tqdm(range(reps), **progress)]
    logger.info(
        f"🎲 시뮬레이션 완료: m={scenario.m}, {scenario.dependence}, "
        f"{reps}회, 방법 {len(methods)}개, {time.perf_counter() - started:.2f}s"
    )
    return records


def simulate_metrics(
    scenario: SimScenario,
    methods: list[ProcedureSpec],
    reps: int,
    seed: int = 0,
    threads: int = 1,
) -> dict[str, MetricSet]:
    records = run_simulation(scenario, methods, reps, seed, threads)
    return compute_metrics(records, [spec.label for spec in methods])
