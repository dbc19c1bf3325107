"""JSON shapes of everything the CLI prints. Field names and nesting are frozen by
the golden files under app/tests/golden."""
from __future__ import annotations

from typing import Dict, List, Optional

from pydantic import BaseModel, Field, validator


class BettiRow(BaseModel):
    n: int
    betti: Dict[int, int] = Field(default_factory=dict)


class BettiTableReport(BaseModel):
    source: str
    surface: List[int]
    curve: List[int]
    order: int
    rows: List[BettiRow] = Field(default_factory=list)


class CycleRow(BaseModel):
    cycle: str
    length: int
    tau: int
    degree: int


class EnumerationReport(BaseModel):
    n: int
    filter: str
    count: int
    cycles: List[CycleRow] = Field(default_factory=list)


class CertificateEntrySchema(BaseModel):
    kind: str
    source: str
    bubble_index: Optional[int] = None
    mults: List[int] = Field(default_factory=list)
    target: Optional[str] = None
    coefficient: str


class PushOrderResult(BaseModel):
    target: str
    normal_form: str


class OrderCheck(BaseModel):
    applicable: bool
    ok: bool
    results: List[PushOrderResult] = Field(default_factory=list)


class ReductionReport(BaseModel):
    input: str
    normal_form: str
    convention: str
    steps: int
    certificate_verified: bool
    certificate: List[CertificateEntrySchema] = Field(default_factory=list)
    order_check: Optional[OrderCheck] = None


class RankReport(BaseModel):
    n: int
    degree: int
    num_cycles: int
    relation_rank: int
    betti_from_series: int
    consistent: bool
    elimination_orders_agree: bool = True
    kernel_basis: List[Dict[str, str]] = Field(default_factory=list)

    @validator("relation_rank")
    def _rank_bounded(cls, value: int, values: dict) -> int:
        if "num_cycles" in values and value > values["num_cycles"]:
            raise ValueError(f"rank {value} exceeds the number of cycles {values['num_cycles']}")
        return value


class CensusDiscrepancy(BaseModel):
    n: int
    degree: int
    census: int
    series: int


class CensusRow(BaseModel):
    n: int
    census: Dict[int, int]
    series: Dict[int, int]
    ok: bool


class CensusReport(BaseModel):
    kind: str
    n_max: int
    ok: bool
    rows: List[CensusRow] = Field(default_factory=list)
    discrepancies: List[CensusDiscrepancy] = Field(default_factory=list)


class CheckReport(BaseModel):
    name: str
    ok: bool
    checked: int = 0
    failures: List[str] = Field(default_factory=list)


class VerificationReport(BaseModel):
    ok: bool
    convention: str
    census: Optional[CensusReport] = None
    canonical_census: Optional[CensusReport] = None
    ranks: List[RankReport] = Field(default_factory=list)
    checks: List[CheckReport] = Field(default_factory=list)


__all__ = [
    "BettiRow",
    "BettiTableReport",
    "CensusDiscrepancy",
    "CensusReport",
    "CensusRow",
    "CertificateEntrySchema",
    "CheckReport",
    "CycleRow",
    "EnumerationReport",
    "OrderCheck",
    "PushOrderResult",
    "RankReport",
    "ReductionReport",
    "VerificationReport",
]
