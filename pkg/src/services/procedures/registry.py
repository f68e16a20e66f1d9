"""ProcedureSpec → 실제 계산 디스패치"""

import logging
from typing import Callable, Optional

import numpy as np

from src.services.exceptions import InputError
from src.services.graph import DependencyGraph
from src.services.procedures import classical, graph_adapted
from src.services.procedures.pruning import randomized_prune, randomized_prune_seeded
from src.services.procedures.spec import ProcedureKind, ProcedureSpec
from src.services.types import PValueVector, RejectionSet, as_pvalues

logger = logging.getLogger(__name__)

Procedure = Callable[[np.ndarray, float, DependencyGraph], RejectionSet]


def run_procedure(
    spec: ProcedureSpec,
    p: PValueVector,
    graph: Optional[DependencyGraph] = None,
    *,
    alpha: Optional[float] = None,
    threads: Optional[int] = None,
    guard: Optional[int] = None,
    seed: Optional[int] = None,
    u: Optional[np.ndarray] = None,
) -> RejectionSet:
    """spec이 지정한 절차를 p에 적용 (alpha, graph 인자가 spec 값을 덮어씀)"""
    from src.services.bounds import bygraph
    from src.services.engine import indbh_fast, indbh_k_fast

    p = as_pvalues(p)
    level = spec.alpha if alpha is None else alpha
    g = graph if graph is not None else spec.graph
    if spec.needs_graph:
        if g is None:
            raise InputError(f"{spec.label} 절차에는 의존성 그래프가 필요합니다")
        if g.m != p.size:
            raise InputError(f"그래프 노드 수 {g.m}와 p-value 개수 {p.size}가 다릅니다")

    kind = spec.kind
    if kind == ProcedureKind.BH:
        return classical.bh(p, level)
    if kind == ProcedureKind.STEP_DOWN_BH:
        return classical.step_down_bh(p, level)
    if kind == ProcedureKind.BONFERRONI:
        return classical.bonferroni(p, level)
    if kind == ProcedureKind.BY:
        return classical.by(p, level)
    if kind == ProcedureKind.EBH:
        return classical.ebh_comparator(p, level)
    if kind == ProcedureKind.BYGRAPH:
        return bygraph(p, level, spec.block_size)
    if kind == ProcedureKind.NAIVE:
        return graph_adapted.naive_adjusted_bh(p, level, g)
    if kind == ProcedureKind.SU:
        return graph_adapted.su_fixed_point(p, level, g)
    if kind == ProcedureKind.INDBH:
        if spec.reference:
            return graph_adapted.indbh_reference(p, level, g, guard)
        return indbh_fast(p, level, g, threads, guard)
    if kind == ProcedureKind.INDBH_K:
        if spec.reference:
            return graph_adapted.indbh_k_reference(p, level, g, spec.k, guard)
        return indbh_k_fast(p, level, g, spec.k, threads, guard)
    if kind == ProcedureKind.RAND_PRUNED:
        if u is not None:
            return randomized_prune(p, level, g, spec.inner, u)
        return randomized_prune_seeded(p, level, g, spec.inner, seed)
    raise InputError(f"지원하지 않는 절차: {kind}")


def as_callable(spec: ProcedureSpec, **options) -> Procedure:
    """(p, alpha, graph) → RejectionSet 형태의 함수로 변환 (오라클 검사용)"""

    def procedure(p: np.ndarray, alpha: float, graph: DependencyGraph) -> RejectionSet:
        return run_procedure(spec, p, graph, alpha=alpha, **options)

    procedure.__name__ = spec.label
    return procedure
