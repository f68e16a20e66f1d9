"""공용 값 타입: p-value 벡터, 노드 부분집합, 기각 집합

모든 외부 인터페이스는 1-based 노드 id를 사용한다.
"""

from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, Optional

import numpy as np

from src.services.exceptions import InputError, ParameterError

PValueVector = np.ndarray
NodeSubset = tuple[int, ...]


def as_pvalues(values: Iterable[float]) -> PValueVector:
    """입력을 검증된 float64 p-value 벡터로 변환"""
    try:
        p = np.asarray(values, dtype=np.float64).reshape(-1)
    except (TypeError, ValueError) as e:
        raise InputError(f"p-value를 숫자로 변환할 수 없습니다: {e}")
    if p.size == 0:
        raise InputError("p-value 벡터가 비어 있습니다")
    bad = np.flatnonzero(~np.isfinite(p) | (p < 0.0) | (p > 1.0))
    if bad.size:
        raise InputError(f"p-value {bad[0] + 1}번이 [0, 1] 범위를 벗어났습니다: {p[bad[0]]}")
    return p


def check_alpha(alpha: float) -> float:
    """유의수준 검증"""
    alpha = float(alpha)
    if not 0.0 <= alpha <= 1.0:
        raise ParameterError(f"유의수준 alpha는 [0, 1] 범위여야 합니다 (현재 {alpha})")
    return alpha


def as_node_subset(nodes: Iterable[int], m: int) -> NodeSubset:
    """정렬된 중복 없는 노드 부분집합 (범위 검증 포함)"""
    members = tuple(sorted({int(v) for v in nodes}))
    if members and (members[0] < 1 or members[-1] > m):
        bad = members[0] if members[0] < 1 else members[-1]
        raise InputError(f"노드 id {bad}가 1..{m} 범위를 벗어났습니다")
    return members


@dataclass(frozen=True)
class RejectionSet:
    """기각된 가설 id 집합 (정렬, 1-based)

    thresholds는 절차가 제공하는 경우의 가설별 로컬 임계값이며 비교에서 제외된다.
    """

    members: NodeSubset = ()
    thresholds: Mapping[int, float] = field(default_factory=dict, compare=False, hash=False)

    @classmethod
    def of(
        cls,
        ids: Iterable[int],
        thresholds: Optional[Mapping[int, float]] = None,
    ) -> "RejectionSet":
        return cls(tuple(sorted({int(i) for i in ids})), dict(thresholds or {}))

    @classmethod
    def from_mask(cls, rejected: np.ndarray, thresholds: Optional[Mapping[int, float]] = None) -> "RejectionSet":
        """0-based boolean 배열에서 생성"""
        return cls(tuple(int(i) + 1 for i in np.flatnonzero(rejected)), dict(thresholds or {}))

    def __contains__(self, item: object) -> bool:
        return item in self.as_set()

    def __iter__(self) -> Iterator[int]:
        return iter(self.members)

    def __len__(self) -> int:
        return len(self.members)

    def as_set(self) -> frozenset[int]:
        return frozenset(self.members)

    def issubset(self, other: "RejectionSet") -> bool:
        return self.as_set() <= other.as_set()

    def to_mask(self, m: int) -> np.ndarray:
        """0-based boolean 배열로 변환"""
        out = np.zeros(m, dtype=bool)
        if self.members:
            out[np.asarray(self.members, dtype=np.int64) - 1] = True
        return out
