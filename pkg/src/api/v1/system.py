"""System/Config API endpoints"""

from fastapi import APIRouter
from typing import Dict, Any

from src.config import app_config

router = APIRouter()


@router.get("/config")
async def get_config() -> Dict[str, Any]:
    """현재 엔진 설정 확인"""
    return {
        "environment": app_config.ENVIRONMENT,
        "default_alpha": app_config.DEFAULT_ALPHA,
        "mis_node_guard": app_config.MIS_NODE_GUARD,
        "oracle_node_guard": app_config.ORACLE_NODE_GUARD,
        "engine_threads": app_config.ENGINE_THREADS,
        "memo_cache_size": app_config.MEMO_CACHE_SIZE,
        "tuning_reps": app_config.TUNING_REPS,
    }
