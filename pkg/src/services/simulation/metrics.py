"""반복 결과 → 방법별 FDR / TP 비율 / 기각 비율"""

import csv
import logging
import math
from dataclasses import dataclass, field
from typing import Iterable, Optional, TextIO

import numpy as np

from src.services.simulation.scenario import MetricSet

logger = logging.getLogger(__name__)

METRIC_COLUMNS = ["method", "m", "metric", "estimate", "se", "reps"]


@dataclass(frozen=True)
class RepRecord:
    """한 반복의 방법별 기각 집합 (1-based id)"""

    m: int
    nonnulls: frozenset[int]
    bh: frozenset[int]
    rejections: dict[str, frozenset[int]] = field(default_factory=dict)


def _mean_se(values: list[float]) -> tuple[Optional[float], Optional[float]]:
    if not values:
        return None, None
    arr = np.asarray(values, dtype=np.float64)
    se = float(arr.std(ddof=1) / math.sqrt(arr.size)) if arr.size >= 2 else None
    return float(arr.mean()), se


def compute_metrics(records: Iterable[RepRecord], methods: Optional[list[str]] = None) -> dict[str, MetricSet]:
    """FDR = 평균 FDP, 두 비율은 조건 사건이 성립한 반복만 평균 (없으면 None)"""
    records = list(records)
    if not records:
        return {}
    methods = methods or list(records[0].rejections)
    m = records[0].m
    out: dict[str, MetricSet] = {}
    for method in methods:
        fdp, tp, rej, sizes, power = [], [], [], [], []
        for rec in records:
            rejected = rec.rejections[method]
            false = len(rejected - rec.nonnulls)
            fdp.append(false / len(rejected) if rejected else 0.0)
            sizes.append(float(len(rejected)))
            bh_true = rec.bh & rec.nonnulls
            if bh_true:
                tp.append(len(rejected & rec.nonnulls) / len(bh_true))
            if rec.bh:
                rej.append(len(rejected) / len(rec.bh))
            if rec.nonnulls:
                power.append(len(rejected & rec.nonnulls) / len(rec.nonnulls))
        fdr_hat, fdr_se = _mean_se(fdp)
        tp_ratio, tp_se = _mean_se(tp)
        rej_ratio, rej_se = _mean_se(rej)
        out[method] = MetricSet(
            method=method,
            m=m,
            reps=len(records),
            fdr_hat=fdr_hat,
            fdr_se=fdr_se,
            tp_ratio=tp_ratio,
            tp_se=tp_se,
            tp_reps=len(tp),
            rej_ratio=rej_ratio,
            rej_se=rej_se,
            rej_reps=len(rej),
            mean_rejections=float(np.mean(sizes)),
            power=_mean_se(power)[0],
        )
    return out


def _fmt(value: Optional[float]) -> str:
    return "NA" if value is None else repr(float(value))


def write_metrics_csv(metrics: dict[str, MetricSet], stream: TextIO) -> None:
    """(method, m, metric, estimate, se, reps) 행, 정의되지 않은 값은 NA"""
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(METRIC_COLUMNS)
    for method in metrics:
        ms = metrics[method]
        writer.writerow([method, ms.m, "fdr", _fmt(ms.fdr_hat), _fmt(ms.fdr_se), ms.reps])
        writer.writerow([method, ms.m, "tp_ratio", _fmt(ms.tp_ratio), _fmt(ms.tp_se), ms.tp_reps])
        writer.writerow([method, ms.m, "rej_ratio", _fmt(ms.rej_ratio), _fmt(ms.rej_se), ms.rej_reps])
