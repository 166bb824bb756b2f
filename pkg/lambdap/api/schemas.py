from enum import Enum
from typing import Any, Dict, List, Optional, Union

from pydantic import BaseModel, Field, model_validator


# =====================================================
# SHARED SHAPES
# =====================================================

Triple = List[int]
PolyJson = List[Triple]


class RationalJson(BaseModel):
    num: PolyJson
    den: PolyJson


ScalarJson = Union[PolyJson, RationalJson]
Subset = List[int]


class BasisTerm(BaseModel):
    coeff: ScalarJson
    basis: List[Subset]


# =====================================================
# OPERATOR DUMPS
# =====================================================

class OperatorEntry(BaseModel):
    in_: List[Subset] = Field(..., alias="in")
    out: List[BasisTerm]

    model_config = {"populate_by_name": True}


class OperatorDump(BaseModel):
    name: str
    dim: int = Field(..., ge=1, le=16)
    domain_arity: int = Field(..., ge=1)
    entries: List[OperatorEntry]


class ChannelDump(BaseModel):
    """Per-k exchange channels of the braiding."""

    dim: int = Field(..., ge=1, le=16)
    channels: Dict[str, OperatorDump]


class StructureDump(BaseModel):
    dim: int = Field(..., ge=1, le=16)
    product: OperatorDump
    coproduct: OperatorDump
    antipode: OperatorDump


# =====================================================
# R-MATRIX CHANNELS
# =====================================================

class FlatTerm(BaseModel):
    coeff: PolyJson
    target: List[int] = Field(..., min_length=2, max_length=2)


class FlatAction(BaseModel):
    source: List[int] = Field(..., min_length=2, max_length=2)
    image: List[FlatTerm]


class ChannelReport(BaseModel):
    dim: int = Field(..., ge=1, le=16)
    flat_order: List[Subset]
    exponent_matrix: List[List[int]]
    reflection_matrix: List[List[PolyJson]]
    annihilation: List[FlatAction] = Field(default_factory=list)
    decay: List[FlatAction] = Field(default_factory=list)
    fusion: List[FlatAction] = Field(default_factory=list)
    exchange: List[FlatAction] = Field(default_factory=list)
    raw: Dict[str, List[FlatAction]] = Field(default_factory=dict)


class RMatrixDump(BaseModel):
    rho: OperatorDump
    channels: Optional[ChannelReport] = None


# =====================================================
# VERIFICATION REPORTS
# =====================================================

class CheckStatus(str, Enum):
    PASS = "pass"
    FAIL = "fail"


class Counterexample(BaseModel):
    basis: List[Subset]
    lhs: Any
    rhs: Any


class VerificationReport(BaseModel):
    check: str
    parameters: Dict[str, Any] = Field(default_factory=dict)
    status: CheckStatus
    counterexample: Optional[Counterexample] = None
    wall_time: Optional[float] = Field(default=None, ge=0.0)
    details: Dict[str, Any] = Field(default_factory=dict)
    checks: List["VerificationReport"] = Field(default_factory=list)

    @model_validator(mode="after")
    def failing_report_has_witness(self):
        if self.status == CheckStatus.FAIL and self.counterexample is None and not self.checks:
            raise ValueError("a failing report must carry a counterexample")
        return self

    @property
    def passed(self) -> bool:
        return self.status == CheckStatus.PASS

    def first_failure(self) -> Optional["VerificationReport"]:
        if self.passed:
            return None
        for child in self.checks:
            found = child.first_failure()
            if found is not None:
                return found
        return self

    def without_timings(self) -> "VerificationReport":
        return self.model_copy(
            update={
                "wall_time": None,
                "checks": [child.without_timings() for child in self.checks],
            }
        )


class LemmaRanges(BaseModel):
    """Bounds for the combinatorial lemma suite."""

    qbinom_n: int = Field(8, ge=0, le=10)
    bubble_dim: int = Field(4, ge=1, le=5)
    summation_max: int = Field(6, ge=0, le=8)
    rl_max: int = Field(3, ge=0, le=4)
    rl_dim: int = Field(3, ge=1, le=3)
    theta_dim: int = Field(6, ge=1, le=8)
    action_dim: int = Field(2, ge=1, le=3)
    ring_n: int = Field(10, ge=0, le=12)

    model_config = {"extra": "forbid"}


# =====================================================
# KNOTS
# =====================================================

class EnhancementReport(BaseModel):
    dim: int
    mu: List[RationalJson]
    lambda_plus: RationalJson
    lambda_minus: RationalJson
    mu_text: List[str]
    lambda_plus_text: str
    lambda_minus_text: str


class InvariantReport(BaseModel):
    dim: int = Field(..., ge=1)
    strands: int = Field(..., ge=1)
    braid: List[int]
    writhe: int
    raw: PolyJson
    raw_text: str
    normalized: Optional[PolyJson] = None
    normalized_text: Optional[str] = None
    scalar_identity: bool
    p_independent: bool


VerificationReport.model_rebuild()
