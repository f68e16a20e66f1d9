"""p-value / 그래프 입력 파일 파서

p-value 파일: 한 줄에 값 하나 또는 `id<TAB>value`. id가 없으면 데이터 줄 순서가 id.
그래프 파일: 한 줄에 `i j` 엣지, 또는 첫 줄 하나로 `block <크기>` / `banded <대역폭>` /
`empty` / `complete`. 모든 형식에서 '#' 이후는 주석, 빈 줄은 무시한다.
"""

import logging
from pathlib import Path
from typing import Iterator, Optional, Union

import numpy as np

from src.services.exceptions import InputError
from src.services.graph import BandedGraph, BlockGraph, DependencyGraph, build_graph, complete_graph, empty_graph

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]


def _data_lines(path: PathLike) -> Iterator[tuple[int, list[str]]]:
    """(줄 번호, 토큰 목록), 주석과 빈 줄 제외"""
    path = Path(path)
    if not path.exists():
        raise InputError(f"파일이 없습니다: {path}")
    with open(path, "r", encoding="utf-8") as f:
        for lineno, raw in enumerate(f, start=1):
            text = raw.split("#", 1)[0].strip()
            if text:
                yield lineno, text.split()


def parse_pvalues(lines: Iterator[tuple[int, list[str]]]) -> np.ndarray:
    values: dict[int, float] = {}
    first_line: dict[int, int] = {}
    count = 0
    for lineno, tokens in lines:
        count += 1
        if len(tokens) == 1:
            node, token = count, tokens[0]
        elif len(tokens) == 2:
            try:
                node = int(tokens[0])
            except ValueError:
                raise InputError(f"가설 id '{tokens[0]}'가 정수가 아닙니다", line=lineno)
            token = tokens[1]
        else:
            raise InputError(f"토큰이 {len(tokens)}개입니다 (값 하나 또는 id와 값)", line=lineno)
        try:
            value = float(token)
        except ValueError:
            raise InputError(f"p-value '{token}'가 숫자가 아닙니다", line=lineno)
        if not 0.0 <= value <= 1.0:
            raise InputError(f"p-value {value}가 [0, 1] 범위를 벗어났습니다", line=lineno)
        if node in values:
            raise InputError(f"가설 id {node}가 {first_line[node]}번째 줄에서 이미 나왔습니다", line=lineno)
        values[node] = value
        first_line[node] = lineno
    if not values:
        raise InputError("p-value가 하나도 없습니다")
    m = len(values)
    expected = set(range(1, m + 1))
    if set(values) != expected:
        bad = min(set(values) - expected)
        raise InputError(f"가설 id {bad}가 1..{m} 범위를 벗어났습니다 (id는 1..m을 정확히 한 번씩)", line=first_line[bad])
    return np.asarray([values[i] for i in range(1, m + 1)], dtype=np.float64)


def read_pvalues(path: PathLike) -> np.ndarray:
    p = parse_pvalues(_data_lines(path))
    logger.debug(f"📄 p-value {p.size}개 로드: {path}")
    return p


GRAPH_KINDS = ("block", "banded", "empty", "complete")


def _graph_from_spec_line(lines: list[tuple[int, list[str]]], m: int) -> DependencyGraph:
    lineno, tokens = lines[0]
    if len(lines) > 1:
        raise InputError(f"'{tokens[0]}' 지정 뒤에는 다른 줄이 올 수 없습니다", line=lines[1][0])
    if len(tokens) > 2:
        raise InputError(f"그래프 지정은 '종류 [크기]' 형식이어야 합니다 (토큰 {len(tokens)}개)", line=lineno)
    size = None
    if len(tokens) == 2:
        try:
            size = int(tokens[1])
        except ValueError:
            raise InputError(f"크기 '{tokens[1]}'가 정수가 아닙니다", line=lineno)
    try:
        return graph_from_spec(tokens[0], m, size)
    except InputError as e:
        raise InputError(str(e), line=lineno)


def read_edge_list(path: PathLike, m: int) -> DependencyGraph:
    """그래프 파일 → 그래프, 모르는 id는 줄 번호와 함께 오류"""
    lines = list(_data_lines(path))
    if lines and lines[0][1][0] in GRAPH_KINDS:
        graph = _graph_from_spec_line(lines, m)
        logger.debug(f"🕸️ {lines[0][1][0]} 그래프 로드 (엣지 {graph.n_edges}개): {path}")
        return graph
    edges = []
    for lineno, tokens in lines:
        if len(tokens) != 2:
            raise InputError(f"엣지는 'i j' 형식이어야 합니다 (토큰 {len(tokens)}개)", line=lineno)
        try:
            a, b = int(tokens[0]), int(tokens[1])
        except ValueError:
            raise InputError(f"엣지 '{' '.join(tokens)}'의 id가 정수가 아닙니다", line=lineno)
        for node in (a, b):
            if not 1 <= node <= m:
                raise InputError(f"노드 id {node}가 p-value id 범위 1..{m}에 없습니다", line=lineno)
        edges.append((a, b))
    graph = build_graph(m, edges)
    logger.debug(f"🕸️ 엣지 {graph.n_edges}개 로드: {path}")
    return graph


def read_cover(path: PathLike) -> list[list[int]]:
    """클리크 커버 파일: 한 줄에 블록 하나 (공백 구분 id)"""
    blocks = []
    for lineno, tokens in _data_lines(path):
        try:
            blocks.append([int(t) for t in tokens])
        except ValueError:
            raise InputError("블록의 id가 정수가 아닙니다", line=lineno)
    return blocks


def graph_from_spec(kind: str, m: int, size: Optional[int] = None) -> DependencyGraph:
    """구조화된 그래프: block(b) / banded(b′) / empty / complete"""
    if kind == "block":
        if not size or not 1 <= size <= m:
            raise InputError(f"블록 크기 {size}는 1..{m} 범위여야 합니다")
        return BlockGraph.equal_blocks(m, size)
    if kind == "banded":
        if not size or size < 1:
            raise InputError(f"대역폭 {size}는 1 이상이어야 합니다")
        return BandedGraph.from_bandwidth(m, size)
    if kind == "empty":
        return empty_graph(m)
    if kind == "complete":
        return complete_graph(m)
    raise InputError(f"알 수 없는 그래프 종류: {kind}")
