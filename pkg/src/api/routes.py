"""Route registration"""

from fastapi import FastAPI

from src.api.v1.system import router as system_router
from src.api.v1.testing import router as testing_router


def register_routes(app: FastAPI) -> None:
    """모든 API 라우터 등록"""

    # Testing API (절차 실행, FDR 한계)
    app.include_router(testing_router, prefix="/api/testing", tags=["testing"])

    # System API (설정 확인)
    app.include_router(system_router, prefix="/api/system", tags=["system"])
