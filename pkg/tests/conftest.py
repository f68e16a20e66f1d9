"""공용 픽스처와 slow 마커 처리"""

import numpy as np
import pytest

from src.services.graph import build_graph

HUB_EDGES = [(1, 2), (1, 3), (2, 3), (3, 4), (3, 5)]
HUB_P = np.array([0.02, 0.02, 0.01, 0.02, 0.04])


def pytest_addoption(parser):
    parser.addoption("--runslow", action="store_true", default=False, help="slow 테스트 실행")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip_slow = pytest.mark.skip(reason="--runslow 옵션이 필요합니다")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


@pytest.fixture
def hub_graph():
    """노드 3이 나머지 모두와 인접하고 1–2가 연결된 5노드 그래프"""
    return build_graph(5, HUB_EDGES)


@pytest.fixture
def hub_p():
    return HUB_P.copy()
