"""
Error hierarchy for dynamo-lab
도메인 오류 정의 (CLI 종료 코드 매핑에 사용)
"""

from typing import Optional


class DynamoLabError(Exception):
    """모든 도메인 오류의 기본 클래스 (exit code 1)"""

    exit_code = 1


class GraphParseError(DynamoLabError):
    """간선 목록 문서의 형식 오류"""

    def __init__(self, message: str, line_no: Optional[int] = None):
        self.line_no = line_no
        if line_no is not None:
            message = f"line {line_no}: {message}"
        super().__init__(message)


class GraphStructureError(DynamoLabError):
    """self-loop, 중복 간선, 범위 밖 노드, 비연결 그래프"""


class InfeasibleParametersError(DynamoLabError):
    """생성기 파라미터로 그래프를 만들 수 없음"""


class ModelError(DynamoLabError):
    """잘못된 threshold model (r, alpha 조합 또는 r > delta)"""


class PreconditionError(DynamoLabError):
    """구성/인증 알고리즘의 전제 조건 위반"""


class RoundRangeError(DynamoLabError):
    """trace 범위를 벗어난 라운드 인덱스"""


class SearchCapExceeded(DynamoLabError):
    """exhaustive search 허용 크기 초과"""

    def __init__(self, n: int, cap: int):
        self.n = n
        self.cap = cap
        super().__init__(f"graph has {n} nodes, exhaustive search cap is {cap}")


class UsageError(DynamoLabError):
    """잘못된 CLI 사용 또는 빈 corpus spec (exit code 2)"""

    exit_code = 2
