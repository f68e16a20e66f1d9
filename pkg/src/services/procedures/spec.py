"""절차 지정 모델"""

from enum import Enum
from typing import Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator

from src.services.exceptions import ParameterError
from src.services.graph import DependencyGraph


class ProcedureKind(str, Enum):
    BH = "bh"
    STEP_DOWN_BH = "sdbh"
    BONFERRONI = "bonf"
    BY = "by"
    EBH = "ebh"
    NAIVE = "naive"
    INDBH = "indbh"
    INDBH_K = "indbhk"
    SU = "su"
    RAND_PRUNED = "randprune"
    BYGRAPH = "bygraph"


GRAPH_AWARE = {
    ProcedureKind.NAIVE,
    ProcedureKind.INDBH,
    ProcedureKind.INDBH_K,
    ProcedureKind.SU,
    ProcedureKind.RAND_PRUNED,
}


class ProcedureSpec(BaseModel):
    """다중검정 절차 하나의 완전한 지정"""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    kind: ProcedureKind = Field(..., description="절차 종류")
    alpha: float = Field(..., ge=0.0, le=1.0, description="유의수준")
    k: Optional[int] = Field(None, ge=2, description="IndBH^(k)의 반복 단계")
    block_size: Optional[int] = Field(None, ge=1, description="BYgraph 블록 크기")
    inner: Optional["ProcedureSpec"] = Field(None, description="무작위 가지치기의 내부 절차")
    graph: Optional[DependencyGraph] = Field(None, description="의존성 그래프")
    reference: bool = Field(False, description="고속 엔진 대신 정의식 구현 사용")

    @model_validator(mode="after")
    def _check_parameters(self) -> "ProcedureSpec":
        if self.kind == ProcedureKind.INDBH_K and self.k is None:
            raise ValueError("indbhk 절차에는 k ≥ 2 가 필요합니다")
        if self.kind == ProcedureKind.RAND_PRUNED and self.inner is None:
            raise ValueError("randprune 절차에는 내부 절차가 필요합니다")
        if self.kind == ProcedureKind.BYGRAPH and self.block_size is None:
            raise ValueError("bygraph 절차에는 블록 크기가 필요합니다")
        return self

    @property
    def needs_graph(self) -> bool:
        return self.kind in GRAPH_AWARE

    @property
    def label(self) -> str:
        if self.kind == ProcedureKind.INDBH_K:
            return f"indbh{self.k}"
        if self.kind == ProcedureKind.RAND_PRUNED:
            return f"randprune({self.inner.label})"
        if self.kind == ProcedureKind.BYGRAPH:
            return f"bygraph={self.block_size}"
        return self.kind.value

    @classmethod
    def from_method(
        cls,
        method: str,
        alpha: float,
        graph: Optional[DependencyGraph] = None,
        inner: Optional[str] = None,
        reference: bool = False,
    ) -> "ProcedureSpec":
        """CLI 메서드 이름 (bh, indbh2, indbhk=4, bygraph=100, randprune …) 해석"""
        name = method.strip().lower()
        params: dict = {"alpha": alpha, "graph": graph, "reference": reference}
        try:
            if name in ("indbh2", "indbh3"):
                return cls(kind=ProcedureKind.INDBH_K, k=int(name[-1]), **params)
            if name.startswith("indbhk="):
                k = int(name.split("=", 1)[1])
                if k == 1:
                    return cls(kind=ProcedureKind.INDBH, **params)
                return cls(kind=ProcedureKind.INDBH_K, k=k, **params)
            if name.startswith("bygraph="):
                return cls(kind=ProcedureKind.BYGRAPH, block_size=int(name.split("=", 1)[1]), **params)
            if name == ProcedureKind.RAND_PRUNED.value:
                inner_spec = cls.from_method(inner or "indbh", alpha, graph, reference=reference)
                return cls(kind=ProcedureKind.RAND_PRUNED, inner=inner_spec, **params)
            return cls(kind=ProcedureKind(name), **params)
        except ValueError as e:
            raise ParameterError(f"알 수 없거나 잘못된 절차 '{method}': {e}")
