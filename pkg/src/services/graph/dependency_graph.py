"""의존성 그래프 표현

노드 id는 외부적으로 1..m 이다. 내부 배열은 0-based 이며 `_`로 시작하는
메서드만 0-based 인덱스를 주고받는다. 자기 자신으로의 엣지는 암묵적이며
저장하지 않는다.
"""

import logging
from dataclasses import dataclass
from typing import Iterable, Optional

import numpy as np
from scipy import sparse
from scipy.sparse.csgraph import connected_components as _csgraph_components

from src.services.exceptions import InputError
from src.services.types import NodeSubset, as_node_subset

logger = logging.getLogger(__name__)


class DependencyGraph:
    """CSR 인접 구조를 가진 무방향 의존성 그래프 (불변)"""

    kind = "explicit"

    def __init__(self, m: int, indptr: np.ndarray, indices: np.ndarray):
        if m < 0:
            raise InputError(f"노드 수는 0 이상이어야 합니다 (현재 {m})")
        self._m = int(m)
        self._indptr = np.asarray(indptr, dtype=np.int64)
        self._indices = np.asarray(indices, dtype=np.int64)

    # ---- 기본 질의 ----------------------------------------------------
    @property
    def m(self) -> int:
        return self._m

    def _neighbors0(self, i: int) -> np.ndarray:
        return self._indices[self._indptr[i]:self._indptr[i + 1]]

    def neighbors(self, i: int) -> NodeSubset:
        """N_i° (자기 자신 제외, 정렬)"""
        self._check_node(i)
        return tuple(int(j) + 1 for j in self._neighbors0(i - 1))

    def neighborhood(self, i: int) -> NodeSubset:
        """N_i = N_i° ∪ {i}"""
        return tuple(sorted(self.neighbors(i) + (i,)))

    @property
    def adjacency(self) -> tuple[NodeSubset, ...]:
        return tuple(self.neighbors(i) for i in range(1, self._m + 1))

    def degrees(self) -> np.ndarray:
        return np.diff(self._indptr)

    @property
    def n_edges(self) -> int:
        return int(self.degrees().sum()) // 2

    def has_edge(self, i: int, j: int) -> bool:
        self._check_node(i)
        self._check_node(j)
        row = self._neighbors0(i - 1)
        pos = np.searchsorted(row, j - 1)
        return bool(pos < row.size and row[pos] == j - 1)

    def edges(self) -> list[tuple[int, int]]:
        """i < j 인 엣지 목록"""
        out = []
        for i in range(self._m):
            for j in self._neighbors0(i):
                if j > i:
                    out.append((i + 1, int(j) + 1))
        return out

    def to_csr(self) -> sparse.csr_matrix:
        data = np.ones(self._indices.size, dtype=np.int8)
        return sparse.csr_matrix((data, self._indices, self._indptr), shape=(self._m, self._m))

    def _check_node(self, i: int) -> None:
        if not 1 <= i <= self._m:
            raise InputError(f"노드 id {i}가 1..{self._m} 범위를 벗어났습니다")

    # ---- 파생 그래프 --------------------------------------------------
    def _induced0(self, nodes0: np.ndarray) -> "DependencyGraph":
        """정렬된 0-based 노드 배열에 대한 유도 부분그래프"""
        nodes0 = np.asarray(nodes0, dtype=np.int64)
        rows: list[np.ndarray] = []
        for new_i, old_i in enumerate(nodes0):
            nbrs = self._neighbors0(int(old_i))
            pos = np.searchsorted(nodes0, nbrs)
            pos = pos[pos < nodes0.size]
            hit = pos[nodes0[pos] == nbrs[:pos.size]] if pos.size else pos
            rows.append(hit)
        return _from_rows(nodes0.size, rows)

    def induced_subgraph(self, nodes: Iterable[int]) -> tuple["DependencyGraph", NodeSubset]:
        """𝔻[B]와 새 id → 원래 id 매핑 (mapping[new-1] = old)"""
        members = as_node_subset(nodes, self._m)
        nodes0 = np.asarray(members, dtype=np.int64) - 1
        return self._induced0(nodes0), members

    def _is_clique0(self, nodes0: np.ndarray) -> bool:
        """nodes0가 닫힌 컴포넌트일 때 완전그래프 여부"""
        s = len(nodes0)
        if s <= 1:
            return True
        deg = self.degrees()[np.asarray(nodes0, dtype=np.int64)]
        return bool(np.all(deg == s - 1))

    def _component_labels(self) -> np.ndarray:
        if self._m == 0:
            return np.zeros(0, dtype=np.int64)
        _, labels = _csgraph_components(self.to_csr(), directed=False)
        return labels.astype(np.int64)

    def __repr__(self) -> str:
        return f"{type(self).__name__}(m={self._m}, edges={self.n_edges})"


class BlockGraph(DependencyGraph):
    """연속 블록이 각각 클리크인 그래프 (인접 리스트를 만들지 않음)"""

    kind = "block"

    def __init__(self, sizes: Iterable[int]):
        sizes = np.asarray(list(sizes), dtype=np.int64)
        if sizes.size and sizes.min() < 1:
            raise InputError("블록 크기는 1 이상이어야 합니다")
        self.sizes = sizes
        self._starts = np.concatenate([[0], np.cumsum(sizes)])
        self._labels = np.repeat(np.arange(sizes.size, dtype=np.int64), sizes)
        super().__init__(int(self._starts[-1]), np.zeros(1, dtype=np.int64), np.zeros(0, dtype=np.int64))

    @classmethod
    def equal_blocks(cls, m: int, b: int) -> "BlockGraph":
        if b < 1 or m < 1:
            raise InputError(f"블록 크기와 노드 수는 1 이상이어야 합니다 (m={m}, b={b})")
        full, rest = divmod(m, b)
        return cls([b] * full + ([rest] if rest else []))

    def _neighbors0(self, i: int) -> np.ndarray:
        k = self._labels[i]
        block = np.arange(self._starts[k], self._starts[k + 1], dtype=np.int64)
        return block[block != i]

    def degrees(self) -> np.ndarray:
        return self.sizes[self._labels] - 1

    def blocks(self) -> tuple[NodeSubset, ...]:
        return tuple(
            tuple(range(int(a) + 1, int(b) + 1)) for a, b in zip(self._starts[:-1], self._starts[1:])
        )

    def to_csr(self) -> sparse.csr_matrix:
        return self._induced0(np.arange(self._m, dtype=np.int64)).to_csr()

    def _induced0(self, nodes0: np.ndarray) -> DependencyGraph:
        nodes0 = np.asarray(nodes0, dtype=np.int64)
        labels = self._labels[nodes0]
        rows = []
        for new_i, lab in enumerate(labels):
            same = np.flatnonzero(labels == lab)
            rows.append(same[same != new_i])
        return _from_rows(nodes0.size, rows)

    def _component_labels(self) -> np.ndarray:
        return self._labels.copy()


class BandedGraph(DependencyGraph):
    """|i − j| ≤ half_width 인 노드끼리 인접한 띠 그래프"""

    kind = "banded"

    def __init__(self, m: int, half_width: int):
        if half_width < 0:
            raise InputError(f"띠 반폭은 0 이상이어야 합니다 (현재 {half_width})")
        self.half_width = int(half_width)
        super().__init__(m, np.zeros(1, dtype=np.int64), np.zeros(0, dtype=np.int64))

    @classmethod
    def from_bandwidth(cls, m: int, bandwidth: int) -> "BandedGraph":
        """대역폭 b′ → 반폭 ⌊(b′ − 1)/2⌋"""
        if bandwidth < 1:
            raise InputError(f"대역폭은 1 이상이어야 합니다 (현재 {bandwidth})")
        return cls(m, (bandwidth - 1) // 2)

    def _neighbors0(self, i: int) -> np.ndarray:
        lo = max(0, i - self.half_width)
        hi = min(self._m, i + self.half_width + 1)
        window = np.arange(lo, hi, dtype=np.int64)
        return window[window != i]

    def degrees(self) -> np.ndarray:
        idx = np.arange(self._m)
        lo = np.maximum(0, idx - self.half_width)
        hi = np.minimum(self._m - 1, idx + self.half_width)
        return (hi - lo).astype(np.int64)

    def to_csr(self) -> sparse.csr_matrix:
        return self._induced0(np.arange(self._m, dtype=np.int64)).to_csr()

    def _induced0(self, nodes0: np.ndarray) -> DependencyGraph:
        nodes0 = np.asarray(nodes0, dtype=np.int64)
        lo = np.searchsorted(nodes0, nodes0 - self.half_width, side="left")
        hi = np.searchsorted(nodes0, nodes0 + self.half_width, side="right")
        rows = []
        for new_i in range(nodes0.size):
            window = np.arange(lo[new_i], hi[new_i], dtype=np.int64)
            rows.append(window[window != new_i])
        return _from_rows(nodes0.size, rows)

    def _component_labels(self) -> np.ndarray:
        if self.half_width == 0:
            return np.arange(self._m, dtype=np.int64)
        return np.zeros(self._m, dtype=np.int64)


def _from_rows(m: int, rows: list[np.ndarray]) -> DependencyGraph:
    lengths = np.fromiter((r.size for r in rows), dtype=np.int64, count=len(rows))
    indptr = np.concatenate([[0], np.cumsum(lengths)]).astype(np.int64)
    indices = np.concatenate(rows).astype(np.int64) if rows else np.zeros(0, dtype=np.int64)
    return DependencyGraph(m, indptr, indices)


def build_graph(m: int, edges: Iterable[tuple[int, int]]) -> DependencyGraph:
    """엣지 목록에서 대칭, 중복 제거된 그래프 생성 ((i,i) 쌍은 무시)"""
    if m < 1:
        raise InputError(f"노드 수는 1 이상이어야 합니다 (현재 {m})")
    pairs = np.asarray(list(edges), dtype=np.int64).reshape(-1, 2)
    if pairs.size:
        bad = (pairs < 1) | (pairs > m)
        if bad.any():
            row = int(np.flatnonzero(bad.any(axis=1))[0])
            raise InputError(f"엣지 {tuple(pairs[row])}의 끝점이 1..{m} 범위를 벗어났습니다")
    pairs = pairs - 1
    pairs = pairs[pairs[:, 0] != pairs[:, 1]]
    both = np.concatenate([pairs, pairs[:, ::-1]], axis=0)
    keys = np.unique(both[:, 0] * m + both[:, 1])
    src, dst = np.divmod(keys, m)
    indptr = np.concatenate([[0], np.cumsum(np.bincount(src, minlength=m))]).astype(np.int64)
    return DependencyGraph(m, indptr, dst.astype(np.int64))


def empty_graph(m: int) -> DependencyGraph:
    return build_graph(m, [])


def complete_graph(m: int) -> BlockGraph:
    return BlockGraph([m])


def induced_subgraph(g: DependencyGraph, nodes: Iterable[int]) -> tuple[DependencyGraph, NodeSubset]:
    return g.induced_subgraph(nodes)


@dataclass(frozen=True)
class ComponentIndex:
    """연결 컴포넌트 분할 (컴포넌트는 최소 원소 순으로 정렬)

    labels[i0]는 0-based 노드의 0-based 컴포넌트 번호이다.
    """

    labels: np.ndarray
    members0: tuple[np.ndarray, ...]

    @property
    def n_components(self) -> int:
        return len(self.members0)

    @property
    def components(self) -> tuple[NodeSubset, ...]:
        return tuple(tuple(int(v) + 1 for v in nodes) for nodes in self.members0)

    def component_of(self, i: int) -> int:
        """노드 i의 컴포넌트 id (1-based)"""
        return int(self.labels[i - 1]) + 1

    def sizes(self) -> np.ndarray:
        return np.fromiter((c.size for c in self.members0), dtype=np.int64, count=len(self.members0))


def connected_components(g: DependencyGraph, labels: Optional[np.ndarray] = None) -> ComponentIndex:
    """연결 컴포넌트 계산 (결정적 순서)"""
    raw = g._component_labels() if labels is None else np.asarray(labels, dtype=np.int64)
    if raw.size == 0:
        return ComponentIndex(raw, ())
    uniq, first = np.unique(raw, return_index=True)
    rank = np.empty(uniq.size, dtype=np.int64)
    rank[np.argsort(first, kind="stable")] = np.arange(uniq.size)
    relabeled = rank[np.searchsorted(uniq, raw)]
    order = np.argsort(relabeled, kind="stable")
    counts = np.bincount(relabeled, minlength=uniq.size)
    members = tuple(np.split(order, np.cumsum(counts)[:-1]))
    return ComponentIndex(relabeled, members)
