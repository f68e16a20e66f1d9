"""극대 독립집합 열거와 독립수

독립집합 = 보그래프의 클리크 이므로 networkx의 Bron–Kerbosch (피벗) 구현을
보그래프에 적용한다. 클리크 컴포넌트는 열거 없이 단일 노드 집합들로 처리한다.
"""

import itertools
import logging
from typing import Optional

import networkx as nx
import numpy as np

from src.config import app_config as config
from src.services.exceptions import GraphSizeError
from src.services.graph.dependency_graph import DependencyGraph, connected_components
from src.services.types import NodeSubset, PValueVector, as_pvalues, check_alpha

logger = logging.getLogger(__name__)


def _complement_of(g: DependencyGraph, nodes0: np.ndarray) -> nx.Graph:
    """nodes0 (0-based, 정렬)로 유도된 부분그래프의 보그래프"""
    sub = g._induced0(nodes0)
    graph = nx.Graph()
    graph.add_nodes_from(range(sub.m))
    graph.add_edges_from((i, int(j)) for i in range(sub.m) for j in sub._neighbors0(i) if j > i)
    return nx.complement(graph)


def component_mis0(
    g: DependencyGraph,
    nodes0: np.ndarray,
    component_id: int = 0,
    guard: Optional[int] = None,
) -> list[np.ndarray]:
    """연결 컴포넌트 하나의 극대 독립집합 (0-based 전역 id, 사전식 정렬)"""
    nodes0 = np.asarray(nodes0, dtype=np.int64)
    if g._is_clique0(nodes0):
        return [nodes0[k:k + 1] for k in range(nodes0.size)]
    guard = config.MIS_NODE_GUARD if guard is None else guard
    if nodes0.size > guard:
        raise GraphSizeError(component_id + 1, int(nodes0.size), guard)
    found = [sorted(c) for c in nx.find_cliques(_complement_of(g, nodes0))]
    found.sort()
    return [nodes0[np.asarray(c, dtype=np.int64)] for c in found]


def maximal_independent_sets(g: DependencyGraph, guard: Optional[int] = None) -> list[NodeSubset]:
    """그래프 전체의 극대 독립집합 목록 (컴포넌트별 열거의 곱)"""
    index = connected_components(g)
    per_component = [
        [tuple(int(v) + 1 for v in s) for s in component_mis0(g, nodes, k, guard)]
        for k, nodes in enumerate(index.members0)
    ]
    result = [tuple(sorted(itertools.chain.from_iterable(combo))) for combo in itertools.product(*per_component)]
    result.sort()
    return result


def _largest_in_component(g: DependencyGraph, nodes0: np.ndarray, k: int, guard: Optional[int]) -> np.ndarray:
    """사전식으로 가장 작은 최대 독립집합"""
    best = None
    for s in component_mis0(g, nodes0, k, guard):
        if best is None or s.size > best.size:
            best = s
    return best if best is not None else np.zeros(0, dtype=np.int64)


def independence_number(g: DependencyGraph, guard: Optional[int] = None) -> int:
    """최대 독립집합의 크기 (0-노드 그래프는 0)"""
    index = connected_components(g)
    total = 0
    for k, nodes in enumerate(index.members0):
        if g._is_clique0(nodes):
            total += 1
        else:
            total += int(_largest_in_component(g, nodes, k, guard).size)
    return total


def largest_ind_containing(
    g: DependencyGraph,
    p: PValueVector,
    alpha: float,
    i: int,
    r: int,
    guard: Optional[int] = None,
) -> NodeSubset:
    """{i} ∪ LargestInd(𝔻[Q_{-i}(r)]), Q_{-i}(r) = {j ∉ N_i : p_j ≤ αr/m}"""
    p = as_pvalues(p)
    alpha = check_alpha(alpha)
    m = g.m
    g._check_node(i)
    blocked = np.zeros(m, dtype=bool)
    blocked[i - 1] = True
    blocked[g._neighbors0(i - 1)] = True
    q0 = np.flatnonzero((p <= alpha * r / m) & ~blocked)
    sub = g._induced0(q0)
    index = connected_components(sub)
    chosen = [i]
    for k, nodes in enumerate(index.members0):
        chosen.extend(int(q0[v]) + 1 for v in _largest_in_component(sub, nodes, k, guard))
    return tuple(sorted(chosen))
