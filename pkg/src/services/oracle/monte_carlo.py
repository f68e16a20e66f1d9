"""몬테카를로 FDR 추정"""

import logging
import time
from concurrent.futures import ThreadPoolExecutor
from typing import Optional

import numpy as np
from pydantic import BaseModel, Field
from tqdm import tqdm

from src.config import app_config as config
from src.services.exceptions import ParameterError
from src.services.oracle.properties import Procedure, procedure_name
from src.services.procedures.classical import bh
from src.services.simulation.generators import cover_graph, gen_block_adversarial, generate
from src.services.simulation.metrics import RepRecord, compute_metrics
from src.services.simulation.runner import resolve_mu_star
from src.services.simulation.scenario import MetricSet, SimScenario

logger = logging.getLogger(__name__)


class FdrEstimate(BaseModel):
    """평균 FDP (FDP(∅) = 0)와 표준오차, 부가 지표"""

    procedure: str = Field(..., description="절차 이름")
    reps: int = Field(..., description="반복 수")
    fdr: float = Field(..., description="FDR 추정값")
    se: Optional[float] = Field(None, description="표준오차 (반복 1회면 None)")
    metrics: MetricSet = Field(..., description="TP/기각 비율 등")


def _adversarial_records(proc: Procedure, scenario: SimScenario, reps: int, seed: int) -> list[RepRecord]:
    """적대적 표본기는 한 번에 (reps, m) 배열로 뽑는다"""
    blocks = scenario.cover_blocks()
    graph = cover_graph(blocks, scenario.m)
    draws = gen_block_adversarial(scenario.m, blocks, scenario.alpha, np.random.default_rng(seed), size=reps)
    records = []
    for p in tqdm(draws, desc=procedure_name(proc), disable=not config.SHOW_PROGRESS, leave=False):
        records.append(RepRecord(
            m=scenario.m,
            nonnulls=frozenset(),
            bh=bh(p, scenario.alpha).as_set(),
            rejections={"proc": proc(p, scenario.alpha, graph).as_set()},
        ))
    return records


def mc_fdr(
    proc: Procedure,
    scenario: SimScenario,
    reps: int,
    seed: int = 0,
    threads: int = 1,
) -> FdrEstimate:
    """scenario에서 reps번 생성해 proc의 FDR을 추정 (시드에 대해 재현 가능)"""
    if reps < 1:
        raise ParameterError(f"반복 수는 1 이상이어야 합니다 (현재 {reps})")
    started = time.perf_counter()
    if scenario.dependence == "block_adversarial":
        records = _adversarial_records(proc, scenario, reps, seed)
    else:
        mu_star = resolve_mu_star(scenario, seed)

        def one(rep: int) -> RepRecord:
            draw = generate(scenario, np.random.default_rng([seed, rep]), mu_star)
            return RepRecord(
                m=scenario.m,
                nonnulls=frozenset(draw.nonnulls),
                bh=bh(draw.p, scenario.alpha).as_set(),
                rejections={"proc": proc(draw.p, scenario.alpha, draw.graph).as_set()},
            )

        if threads > 1:
            with ThreadPoolExecutor(max_workers=threads) as pool:
                records = list(pool.map(one, range(reps)))
        else:
            records = [one(rep) for rep in range(reps)]

    metrics = compute_metrics(records, ["proc"])["proc"].model_copy(update={"method": procedure_name(proc)})
    logger.info(
        f"📊 {metrics.method} FDR 추정: {metrics.fdr_hat:.5f} (SE {metrics.fdr_se or 0.0:.5f}, "
        f"{reps}회, {time.perf_counter() - started:.2f}s)"
    )
    return FdrEstimate(procedure=metrics.method, reps=reps, fdr=metrics.fdr_hat, se=metrics.fdr_se, metrics=metrics)
