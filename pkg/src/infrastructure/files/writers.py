"""기각 결과 / 한계 표 출력 (stdout은 실행마다 바이트 단위로 동일해야 함)"""

import json
from typing import Optional, TextIO

import numpy as np

from src.services.bounds import BoundResult
from src.services.types import RejectionSet


def rejection_records(rejections: RejectionSet, p: np.ndarray) -> list[dict]:
    return [
        {"id": i, "p": float(p[i - 1]), "threshold": rejections.thresholds.get(i)}
        for i in rejections
    ]


def write_rejections(rejections: RejectionSet, p: np.ndarray, stream: TextIO, fmt: str = "tsv") -> None:
    """기각 가설마다 한 줄: id, p, 로컬 임계값 (없으면 NA)"""
    records = rejection_records(rejections, p)
    if fmt == "json":
        json.dump(records, stream, sort_keys=True)
        stream.write("\n")
        return
    stream.write("id\tp\tthreshold\n")
    for rec in records:
        threshold = "NA" if rec["threshold"] is None else repr(rec["threshold"])
        stream.write(f"{rec['id']}\t{rec['p']!r}\t{threshold}\n")


def summary_line(m: int, n_bh: int, n_rejected: int, seconds: float, method: Optional[str] = None) -> str:
    head = f"method={method}\t" if method else ""
    return f"# {head}m={m}\tbh={n_bh}\trejected={n_rejected}\tseconds={seconds:.6f}"


def write_bounds(result: BoundResult, stream: TextIO, fmt: str = "tsv") -> None:
    data = result.model_dump()
    if fmt == "json":
        json.dump(data, stream, sort_keys=True)
        stream.write("\n")
        return
    stream.write("quantity\tvalue\n")
    for key in ("m", "alpha", "n_edges", "max_degree", "lower", "upper", "by_level", "bygraph_level"):
        value = data[key]
        stream.write(f"{key}\t{'NA' if value is None else repr(value)}\n")
