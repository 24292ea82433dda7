"""
JSON wire models
CLI 출력과 corpus spec 입력에 쓰이는 pydantic 모델
"""

from typing import Any, Dict, List, Optional

from pydantic import BaseModel, Field, model_validator


class ExactValue(BaseModel):
    """정확한 값(문자열)과 float 근사치"""

    exact: str = Field(..., description="Exact value, e.g. '3/2' or '8*sqrt(5)/5 - 1'")
    value: float = Field(..., description="Floating point approximation")


class CertificateModel(BaseModel):
    property: str
    model: str
    set: List[int]
    verdict: Optional[bool] = Field(..., description="null when the round budget ran out")
    indeterminate: bool
    rounds: int
    outcome: str
    period: Optional[int] = None
    failure_round: Optional[int] = None
    trace: Optional[List[List[int]]] = None


class SearchResultModel(BaseModel):
    property: str
    model: str
    n: int
    min_size: Optional[int] = Field(None, description="null when max_size was reached without a witness")
    witness: Optional[List[int]] = None
    examined: int = Field(..., ge=0, description="Subsets certified up to and including the witness")
    exhausted_up_to: int = Field(..., ge=0, description="Every subset of at most this size was checked")
    indeterminate: int = Field(0, ge=0)


class AllSetsModel(BaseModel):
    property: str
    model: str
    size: int
    count: int
    sets: List[List[int]]


class ConstructionReportModel(BaseModel):
    construction: str
    model: str
    set: List[int]
    size: int
    guarantee: Optional[ExactValue] = None
    certified: bool
    details: Dict[str, Any] = Field(default_factory=dict)


class BoundModel(BaseModel):
    lower: ExactValue
    upper: Optional[ExactValue] = None
    status: str
    reference: str


class BoundsReportModel(BaseModel):
    model: str
    assumptions: Dict[str, Any]
    dynamo: BoundModel
    monotone_lower: BoundModel
    stable: BoundModel
    immortal: BoundModel
    gunderson_condition: Optional[bool] = None


class CheckResultModel(BaseModel):
    id: str
    passed: bool
    claim: str
    measured: Dict[str, Any] = Field(default_factory=dict)
    failures: List[str] = Field(default_factory=list)
    error: Optional[str] = None


class FamilySpec(BaseModel):
    """생성기 이름과 파라미터 값 목록 (데카르트 곱으로 확장)"""

    generator: str
    params: Dict[str, List[Any]] = Field(default_factory=dict)


class RandomGraphSpec(BaseModel):
    count: int = Field(..., ge=1)
    n_min: int = Field(..., ge=2)
    n_max: int = Field(..., ge=2)
    p_min: float = Field(..., gt=0, le=1)
    p_max: float = Field(..., gt=0, le=1)
    seed: int = 0

    @model_validator(mode="after")
    def check_ranges(self) -> "RandomGraphSpec":
        if self.n_min > self.n_max:
            raise ValueError(f"n_min {self.n_min} > n_max {self.n_max}")
        if self.p_min > self.p_max:
            raise ValueError(f"p_min {self.p_min} > p_max {self.p_max}")
        return self


class CorpusSpec(BaseModel):
    families: List[FamilySpec] = Field(default_factory=list)
    random_graphs: Optional[RandomGraphSpec] = None
    models: List[str] = Field(default_factory=list, description="Compact model labels, e.g. 'twoway-r:2'")
    properties: List[str] = Field(default_factory=lambda: ["dynamo", "monotone", "stable", "immortal"])
    checks: List[str] = Field(default_factory=list, description="Check ids; empty means every check")

    def is_empty(self) -> bool:
        return not self.families and self.random_graphs is None and not self.checks
