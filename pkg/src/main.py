"""Main FastAPI application - 의존성 그래프 FDR 서비스"""

import logging
import sys
from contextlib import asynccontextmanager

from dotenv import load_dotenv
from fastapi import FastAPI, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

# .env 파일 로드
load_dotenv()

from src.config import app_config as config
from src.api.routes import register_routes
from src.services.exceptions import GraphSizeError, InputError, ParameterError

# 로깅 설정
logging.basicConfig(
    level=getattr(logging, config.LOG_LEVEL),
    format=config.LOG_FORMAT
)
logger = logging.getLogger(__name__)

# Windows 환경 UTF-8 설정
if sys.platform == 'win32':
    import codecs
    sys.stdout = codecs.getwriter('utf-8')(sys.stdout.buffer, 'strict')
    sys.stderr = codecs.getwriter('utf-8')(sys.stderr.buffer, 'strict')


@asynccontextmanager
async def lifespan(app: FastAPI):
    """앱 생명주기 관리"""
    logger.info("🚀 FDR 그래프 서버 시작 중...")
    logger.info(f"📍 환경: {config.ENVIRONMENT}")

    errors = config.validate_config()
    if not errors:
        config.print_config_summary()

    logger.info("✅ 서버 초기화 완료")

    yield

    logger.info("🛑 서버 종료 완료")


def create_app() -> FastAPI:
    """FastAPI 앱 생성"""

    app = FastAPI(
        title="FDR Graph API",
        description="의존성 그래프 하의 FDR 다중검정 (IndBH, IndBH^(k), SU) 서비스",
        version="1.0.0",
        docs_url="/docs",
        redoc_url="/redoc",
        openapi_url="/openapi.json",
        lifespan=lifespan
    )

    logger.info(f"🌐 CORS 허용 origins: {config.CORS_ORIGINS}")

    app.add_middleware(
        CORSMiddleware,
        allow_origins=list(config.CORS_ORIGINS),
        allow_credentials=True,
        allow_methods=["GET", "POST", "OPTIONS"],
        allow_headers=["*"],
    )

    # 도메인 예외 처리 (라우터 밖으로 새어 나온 경우)
    @app.exception_handler(InputError)
    async def input_error_handler(request: Request, exc: InputError):
        return JSONResponse(status_code=422, content={"detail": str(exc)})

    @app.exception_handler(ParameterError)
    async def parameter_error_handler(request: Request, exc: ParameterError):
        return JSONResponse(status_code=400, content={"detail": str(exc)})

    @app.exception_handler(GraphSizeError)
    async def graph_size_handler(request: Request, exc: GraphSizeError):
        logger.warning(f"⚠️ 가드 초과: 컴포넌트 {exc.component_id} ({exc.size} > {exc.guard})")
        return JSONResponse(status_code=413, content={"detail": str(exc), "component_id": exc.component_id})

    # 전역 예외 처리
    @app.exception_handler(Exception)
    async def global_exception_handler(request: Request, exc: Exception):
        logger.error(f"전역 예외: {exc}")
        return JSONResponse(
            status_code=500,
            content={"detail": "내부 서버 오류가 발생했습니다."}
        )

    # 라우터 등록
    register_routes(app)

    @app.get("/")
    async def root():
        return {
            "message": "FDR Graph API 서버",
            "version": "1.0.0",
            "status": "running",
            "docs": "/docs"
        }

    @app.get("/health")
    async def health():
        return {"status": "healthy", "service": "FDR Graph API"}

    return app


# 앱 인스턴스 생성
app = create_app()


if __name__ == "__main__":
    import uvicorn

    logger.info(f"🚀 서버 시작: {config.HOST}:{config.PORT}")
    uvicorn.run(
        app,
        host=config.HOST,
        port=config.PORT,
        log_level="info",
        access_log=True
    )
