"""도메인 예외 정의

CLI와 HTTP 계층은 예외 타입으로 종료 코드 / 상태 코드를 결정한다.
"""

from typing import Optional


class InputError(ValueError):
    """잘못된 입력 (p-value 파일, 엣지 리스트, 노드 id 등)"""

    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        if line is not None:
            message = f"{line}번째 줄: {message}"
        super().__init__(message)


class ParameterError(ValueError):
    """유의수준, 시나리오 파라미터 등이 허용 범위를 벗어남"""


class GraphSizeError(RuntimeError):
    """컴포넌트 크기가 열거 가드를 초과함"""

    def __init__(self, component_id: int, size: int, guard: int):
        self.component_id = component_id
        self.size = size
        self.guard = guard
        super().__init__(
            f"컴포넌트 {component_id}의 노드 수 {size}가 가드 {guard}를 초과합니다"
        )
