"""무작위 검사 인스턴스와 (P1) 자기일관성 / (P2) 단조성 / (P3) 이웃 무시 검사기"""

import logging
from dataclasses import dataclass
from typing import Callable, Iterable, Literal, Optional

import numpy as np
from pydantic import BaseModel, Field

from src.services.graph import BandedGraph, BlockGraph, DependencyGraph, build_graph
from src.services.types import RejectionSet

logger = logging.getLogger(__name__)

Procedure = Callable[[np.ndarray, float, DependencyGraph], RejectionSet]

DEFAULT_DENSITIES = (0.1, 0.3, 0.6)
DEFAULT_ALPHAS = (0.05, 0.1, 0.2, 0.5)


@dataclass(frozen=True)
class ProblemInstance:
    p: np.ndarray
    alpha: float
    graph: DependencyGraph
    family: str

    @property
    def m(self) -> int:
        return int(self.p.size)


class Violation(BaseModel):
    pvalues: list[float] = Field(..., description="위반이 관찰된 입력")
    alpha: float = Field(..., description="유의수준")
    witness: list[int] = Field(..., description="위반 가설 id (1-based)")
    family: str = Field("", description="인스턴스 종류")


class PropertyReport(BaseModel):
    """성질 하나에 대한 검사 결과 (violations가 비면 성립)"""

    property: Literal["SelfConsistency", "Monotonicity", "NeighborBlindness"]
    procedure: str = Field(..., description="검사한 절차 이름")
    instances: int = Field(0, description="검사한 인스턴스 수")
    violations: list[Violation] = Field(default_factory=list)

    @property
    def held(self) -> bool:
        return not self.violations


def _random_pvalues(m: int, rng: np.random.Generator) -> np.ndarray:
    """좌표마다 Uniform 또는 Beta(0.1, 1) 반반 혼합"""
    uniform = rng.random(m)
    skewed = rng.beta(0.1, 1.0, size=m)
    return np.where(rng.random(m) < 0.5, uniform, skewed)


def _erdos_renyi(m: int, density: float, rng: np.random.Generator) -> DependencyGraph:
    upper = np.triu(rng.random((m, m)) < density, k=1)
    rows, cols = np.nonzero(upper)
    return build_graph(m, zip((rows + 1).tolist(), (cols + 1).tolist()))


def _block(m: int, rng: np.random.Generator) -> DependencyGraph:
    b = int(rng.integers(2, 5))
    sizes = [b] * (m // b) + ([m % b] if m % b else [])
    return BlockGraph(sizes)


def random_instances(
    n: int,
    m_max: int = 10,
    seed: int = 0,
    densities: Iterable[float] = DEFAULT_DENSITIES,
    structured: bool = True,
    m_min: int = 1,
    alphas: Iterable[float] = DEFAULT_ALPHAS,
) -> list[ProblemInstance]:
    """Erdős–Rényi (밀도별), 블록, 띠 그래프를 번갈아 생성"""
    rng = np.random.default_rng(seed)
    families = [f"er{d:g}" for d in densities] + (["block", "banded"] if structured else [])
    alphas = list(alphas)
    density_of = {f"er{d:g}": float(d) for d in densities}
    out = []
    for t in range(n):
        family = families[t % len(families)]
        m = int(rng.integers(m_min, m_max + 1))
        if family == "block":
            graph = _block(m, rng)
        elif family == "banded":
            graph = BandedGraph(m, int(rng.integers(1, 3)))
        else:
            graph = _erdos_renyi(m, density_of[family], rng)
        alpha = float(alphas[int(rng.integers(len(alphas)))])
        out.append(ProblemInstance(_random_pvalues(m, rng), alpha, graph, family))
    return out


def procedure_name(proc: Procedure) -> str:
    return getattr(proc, "__name__", type(proc).__name__)


def _violation(inst: ProblemInstance, p: np.ndarray, witness: Iterable[int]) -> Violation:
    return Violation(pvalues=p.tolist(), alpha=inst.alpha, witness=sorted(witness), family=inst.family)


def check_self_consistency(proc: Procedure, instances: list[ProblemInstance]) -> PropertyReport:
    """(P1) 기각된 모든 i에 대해 p_i ≤ α|ℛ|/m"""
    report = PropertyReport(property="SelfConsistency", procedure=procedure_name(proc), instances=len(instances))
    for inst in instances:
        rejected = proc(inst.p, inst.alpha, inst.graph)
        limit = inst.alpha * len(rejected) / inst.m
        bad = [i for i in rejected if inst.p[i - 1] > limit]
        if bad:
            report.violations.append(_violation(inst, inst.p, bad))
    return report


def check_monotonicity(proc: Procedure, instances: list[ProblemInstance], seed: int = 0) -> PropertyReport:
    """(P2) p′ ⪯ p 이면 ℛ(p) ⊆ ℛ(p′): 좌표별 균등 축소와 p/2 두 가지"""
    rng = np.random.default_rng(seed)
    report = PropertyReport(property="Monotonicity", procedure=procedure_name(proc), instances=len(instances))
    for inst in instances:
        base = proc(inst.p, inst.alpha, inst.graph).as_set()
        for shrunk in (inst.p * rng.random(inst.m), inst.p / 2.0):
            lost = base - proc(shrunk, inst.alpha, inst.graph).as_set()
            if lost:
                report.violations.append(_violation(inst, shrunk, lost))
                break
    return report


def check_neighbor_blindness(
    proc: Procedure,
    g: Optional[DependencyGraph],
    instances: list[ProblemInstance],
) -> PropertyReport:
    """(P3) i ∈ ℛ(p) ⇔ i ∈ ℛ(𝟏^{N_i°} p), g가 None이면 인스턴스의 그래프 사용"""
    report = PropertyReport(property="NeighborBlindness", procedure=procedure_name(proc), instances=len(instances))
    for inst in instances:
        graph = inst.graph if g is None else g
        base = proc(inst.p, inst.alpha, graph).as_set()
        bad = []
        for i in range(inst.m):
            neighbors = graph._neighbors0(i)
            if not neighbors.size:
                continue
            q = inst.p.copy()
            q[neighbors] = 1.0
            if ((i + 1) in base) != ((i + 1) in proc(q, inst.alpha, graph)):
                bad.append(i + 1)
        if bad:
            report.violations.append(_violation(inst, inst.p, bad))
    return report
