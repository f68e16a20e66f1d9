"""Configuration settings for the dependency-graph FDR toolkit"""

import logging
import os
from dotenv import load_dotenv

# 로깅 설정
logger = logging.getLogger(__name__)

# .env 파일 로드
for _env in ('.env', '.env.local'):
    if os.path.exists(_env):
        try:
            load_dotenv(_env)
            logger.info(f"{_env} 파일 로드됨")
        except Exception:
            pass

# 환경 설정
ENVIRONMENT = os.getenv("ENVIRONMENT", "development")
IS_PRODUCTION = ENVIRONMENT == "production"

# 검정 기본값
DEFAULT_ALPHA = float(os.getenv("DEFAULT_ALPHA", "0.1"))

# 그래프 열거 가드 (컴포넌트당 노드 수)
MIS_NODE_GUARD = int(os.getenv("MIS_NODE_GUARD", "64"))
ORACLE_NODE_GUARD = int(os.getenv("ORACLE_NODE_GUARD", "20"))

# 엔진 설정
ENGINE_THREADS = int(os.getenv("ENGINE_THREADS", "1"))
MEMO_CACHE_SIZE = int(os.getenv("MEMO_CACHE_SIZE", "4096"))

# 시뮬레이션 설정
TUNING_REPS = int(os.getenv("TUNING_REPS", "200"))
TUNING_TOLERANCE = float(os.getenv("TUNING_TOLERANCE", "0.01"))
TUNING_MU_MAX = float(os.getenv("TUNING_MU_MAX", "20.0"))
GAUSS_TRUNCATION = int(os.getenv("GAUSS_TRUNCATION", "12"))
SHOW_PROGRESS = os.getenv("SHOW_PROGRESS", "true").lower() == "true"

# 서버 설정
HOST = os.getenv("HOST", "0.0.0.0")
PORT = int(os.getenv("PORT", "8000"))

# CORS 설정
_default_cors = ",".join([
    "http://localhost:3000",
    "http://127.0.0.1:3000",
])
CORS_ORIGINS = [origin.strip() for origin in os.getenv("CORS_ORIGINS", _default_cors).split(",")]

# 로깅 설정
LOG_LEVEL = os.getenv("LOG_LEVEL", "INFO" if IS_PRODUCTION else "DEBUG")
LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"


def validate_config() -> list[str]:
    """환경변수 검증"""
    errors = []

    if not 0.0 <= DEFAULT_ALPHA <= 1.0:
        errors.append(f"DEFAULT_ALPHA는 [0, 1] 범위여야 합니다 (현재 {DEFAULT_ALPHA})")
    if MIS_NODE_GUARD < 1:
        errors.append("MIS_NODE_GUARD는 1 이상이어야 합니다")
    if ORACLE_NODE_GUARD < 1:
        errors.append("ORACLE_NODE_GUARD는 1 이상이어야 합니다")
    if ENGINE_THREADS < 1:
        errors.append("ENGINE_THREADS는 1 이상이어야 합니다")
    if TUNING_REPS < 1:
        errors.append("TUNING_REPS는 1 이상이어야 합니다")

    for error in errors:
        logger.warning(f"⚠️ {error}")

    return errors


def print_config_summary() -> None:
    """설정 요약 출력"""
    logger.info("=== 설정 요약 ===")
    logger.info(f"환경: {ENVIRONMENT}")
    logger.info(f"기본 유의수준: {DEFAULT_ALPHA}")
    logger.info(f"MIS 가드: {MIS_NODE_GUARD} 노드/컴포넌트")
    logger.info(f"오라클 가드: {ORACLE_NODE_GUARD} 노드")
    logger.info(f"엔진 스레드: {ENGINE_THREADS}")
    logger.info(f"메모 캐시 크기: {MEMO_CACHE_SIZE}")
    logger.info("================")
