"""Testing API - 다중검정 절차와 FDR 한계 엔드포인트"""

import logging
import time
from typing import Literal, Optional

from fastapi import APIRouter, HTTPException
from pydantic import BaseModel, Field

from src.config import app_config as config
from src.infrastructure.files import graph_from_spec
from src.services.bounds import BoundResult, CliqueCover, summarize_bounds
from src.services.exceptions import GraphSizeError, InputError, ParameterError
from src.services.graph import DependencyGraph, build_graph
from src.services.procedures import ProcedureKind, ProcedureSpec, bh
from src.services.procedures.registry import run_procedure
from src.services.types import as_pvalues

logger = logging.getLogger(__name__)

router = APIRouter()


# Request/Response 모델
class GraphBody(BaseModel):
    """의존성 그래프: 엣지 목록 또는 구조화된 형태"""
    kind: Literal["edges", "block", "banded", "empty", "complete"] = Field("empty", description="그래프 종류")
    edges: list[tuple[int, int]] = Field(default=[], description="엣지 목록 (kind=edges, 1-based)")
    size: Optional[int] = Field(default=None, description="블록 크기 b 또는 대역폭 b′")


class RejectRequest(BaseModel):
    """절차 실행 요청"""
    pvalues: list[float] = Field(..., description="p-value 목록 (id = 위치 + 1)", min_length=1)
    graph: Optional[GraphBody] = Field(default=None, description="의존성 그래프")
    method: str = Field(default="indbh", description="절차 이름")
    k: Optional[int] = Field(default=None, description="IndBH^(k)의 k (지정하면 method 대신 사용)")
    inner: Optional[str] = Field(default=None, description="randprune 내부 절차")
    alpha: float = Field(default=config.DEFAULT_ALPHA, description="유의수준")
    seed: Optional[int] = Field(default=None, description="randprune 시드")
    unsafe: bool = Field(default=False, description="naive 대조군 허용")


class RejectResponse(BaseModel):
    """절차 실행 응답"""
    method: str
    m: int
    alpha: float
    rejected: list[int]
    bh_count: int
    thresholds: dict[int, float]
    seconds: float


class BoundsRequest(BaseModel):
    """FDR 한계 요청"""
    m: int = Field(..., description="가설 수", ge=1)
    graph: GraphBody = Field(..., description="의존성 그래프")
    alpha: float = Field(default=config.DEFAULT_ALPHA, description="유의수준")
    cover: Optional[list[list[int]]] = Field(default=None, description="클리크 커버 (없으면 탐욕 커버)")
    bygraph_block: Optional[int] = Field(default=None, description="BYgraph 수준의 블록 크기")


def _graph(body: Optional[GraphBody], m: int) -> Optional[DependencyGraph]:
    if body is None:
        return None
    if body.kind == "edges":
        return build_graph(m, body.edges)
    return graph_from_spec(body.kind, m, body.size)


def _http_error(e: Exception, what: str) -> HTTPException:
    logger.warning(f"⚠️ {what} 실패: {e}")
    if isinstance(e, InputError):
        return HTTPException(status_code=422, detail=str(e))
    if isinstance(e, GraphSizeError):
        return HTTPException(status_code=413, detail=str(e))
    return HTTPException(status_code=400, detail=str(e))


# API 엔드포인트
@router.post("/reject", response_model=RejectResponse, tags=["testing"])
def reject(request: RejectRequest):
    """
    절차 실행 API

    p-value와 의존성 그래프에 지정한 절차를 적용해 기각 집합을 돌려줍니다.
    """
    try:
        p = as_pvalues(request.pvalues)
        method = f"indbhk={request.k}" if request.k else request.method
        spec = ProcedureSpec.from_method(method, request.alpha, inner=request.inner)
        if ProcedureKind.NAIVE in (spec.kind, spec.inner.kind if spec.inner else None) and not request.unsafe:
            raise ParameterError("naive 절차는 FDR을 보장하지 않습니다 (unsafe=true 필요)")
        graph = _graph(request.graph, p.size)
        if spec.needs_graph and graph is None:
            raise InputError(f"{spec.label} 절차에는 graph가 필요합니다")

        started = time.perf_counter()
        rejections = run_procedure(spec, p, graph, seed=request.seed)
        seconds = time.perf_counter() - started
        logger.info(f"🧪 {spec.label}: m={p.size}, 기각 {len(rejections)}개 ({seconds:.3f}s)")

        return RejectResponse(
            method=spec.label,
            m=p.size,
            alpha=request.alpha,
            rejected=list(rejections),
            bh_count=len(bh(p, request.alpha)),
            thresholds=dict(rejections.thresholds),
            seconds=seconds,
        )

    except (InputError, ParameterError, GraphSizeError) as e:
        raise _http_error(e, "절차 실행")


@router.post("/bounds", response_model=BoundResult, tags=["testing"])
def bounds(request: BoundsRequest):
    """
    FDR 한계 API

    그래프에서 BH의 최악 FDR 상한/하한과 BY, BYgraph 보정 수준을 계산합니다.
    """
    try:
        graph = _graph(request.graph, request.m)
        cover = CliqueCover.of(request.cover, request.m, graph) if request.cover else None
        block_size = request.bygraph_block or (request.graph.size if request.graph.kind == "block" else None)
        return summarize_bounds(graph, request.alpha, cover, block_size)

    except (InputError, ParameterError, GraphSizeError) as e:
        raise _http_error(e, "한계 계산")
