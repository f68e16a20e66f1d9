"""시뮬레이션 시나리오와 지표 모델"""

import logging
from pathlib import Path
from typing import Literal, Optional, Union

from dotenv import dotenv_values
from pydantic import BaseModel, Field, ValidationError, model_validator

from src.services.exceptions import ParameterError

logger = logging.getLogger(__name__)


class SimScenario(BaseModel):
    """합성 p-value 분포의 완전한 기술"""

    m: int = Field(..., ge=1, description="가설 수")
    dependence: Literal["block", "banded", "block_adversarial", "negative_gaussian"] = Field(
        "block", description="의존 구조"
    )
    block_size: int = Field(1, ge=1, description="블록 크기 b")
    bandwidth: int = Field(1, ge=1, description="띠 대역폭 b′")
    rho: float = Field(0.0, description="상관계수 ρ")
    placement: Literal["uniform", "clustered"] = Field("uniform", description="비귀무 위치 배치")
    pi0: float = Field(1.0, ge=0.0, le=1.0, description="귀무가설 비율 π_0")
    lambda0: float = Field(10.0, gt=0.0, description="군집당 평균 비귀무 수 λ_0")
    tau: float = Field(5.0, gt=0.0, description="군집 폭 τ")
    signal: Literal["fixed", "random_exp"] = Field("fixed", description="신호 크기 분포")
    mu_star: Optional[float] = Field(None, ge=0.0, description="신호 크기 μ*")
    tarpow: Optional[float] = Field(None, gt=0.0, lt=1.0, description="μ* 조정 목표 BH 검정력")
    side: Literal["two", "one"] = Field("two", description="양측/단측 p-value")
    alpha: float = Field(0.1, ge=0.0, le=1.0, description="적대적 표본기와 절차의 수준")
    cover: Optional[str] = Field(None, description="적대적 표본기 커버, 예: '1|2,3'")

    @model_validator(mode="after")
    def _check_dependence(self) -> "SimScenario":
        b = self.block_size
        if self.dependence in ("block", "negative_gaussian", "block_adversarial") and self.cover is None:
            if self.m % b:
                raise ValueError(f"블록 크기 {b}가 m={self.m}을 나누지 않습니다")
        if self.dependence == "block":
            low = -1.0 / (b - 1) if b > 1 else -1.0
            if not low < self.rho <= 1.0:
                raise ValueError(f"ρ={self.rho}는 ({low:.4g}, 1] 범위여야 합니다 (양의 정부호)")
        if self.dependence == "negative_gaussian":
            low = -1.0 / (b - 1) if b > 1 else -1.0
            if not low < self.rho < 0.0:
                raise ValueError(f"음의 상관 ρ={self.rho}는 ({low:.4g}, 0) 범위여야 합니다")
        if self.dependence == "banded" and not -1.0 < self.rho < 1.0:
            raise ValueError(f"띠 공분산의 ρ={self.rho}는 (−1, 1) 범위여야 합니다")
        return self

    @property
    def has_signal(self) -> bool:
        return self.dependence in ("block", "banded") and self.pi0 < 1.0

    def cover_blocks(self) -> list[list[int]]:
        """커버 문자열 → 블록 목록, 없으면 크기 block_size의 연속 블록"""
        if self.cover:
            try:
                return [[int(v) for v in part.split(",") if v.strip()] for part in self.cover.split("|")]
            except ValueError as e:
                raise ParameterError(f"커버 형식 오류 '{self.cover}': {e}")
        b = self.block_size
        return [list(range(start, start + b)) for start in range(1, self.m + 1, b)]


class MetricSet(BaseModel):
    """방법 하나의 몬테카를로 지표 (비율은 조건부 평균, 정의되지 않으면 None)"""

    method: str = Field(..., description="절차 라벨")
    m: int = Field(..., description="가설 수")
    reps: int = Field(..., description="반복 수")
    fdr_hat: float = Field(..., description="평균 FDP")
    fdr_se: Optional[float] = Field(None, description="FDR 표준오차")
    tp_ratio: Optional[float] = Field(None, description="BH 대비 참 발견 비율")
    tp_se: Optional[float] = Field(None, description="TP 비율 표준오차")
    tp_reps: int = Field(0, description="TP 비율 조건을 만족한 반복 수")
    rej_ratio: Optional[float] = Field(None, description="BH 대비 기각 수 비율")
    rej_se: Optional[float] = Field(None, description="기각 비율 표준오차")
    rej_reps: int = Field(0, description="기각 비율 조건을 만족한 반복 수")
    mean_rejections: float = Field(0.0, description="평균 기각 수")
    power: Optional[float] = Field(None, description="평균 검정력 |ℛ∩H_1|/|H_1|")


def load_scenario(path: Union[str, Path], **overrides) -> SimScenario:
    """평면 key=value 시나리오 파일 로드 (키는 SimScenario 필드명)"""
    path = Path(path)
    if not path.exists():
        raise ParameterError(f"시나리오 파일이 없습니다: {path}")
    raw = {key.strip().lower(): value for key, value in dotenv_values(path).items() if value not in (None, "")}
    raw.update({k: v for k, v in overrides.items() if v is not None})
    try:
        scenario = SimScenario.model_validate(raw)
    except ValidationError as e:
        raise ParameterError(f"잘못된 시나리오 {path.name}: {e.errors()[0]['msg']}")
    logger.info(f"📄 시나리오 로드: {path.name} (m={scenario.m}, {scenario.dependence})")
    return scenario
