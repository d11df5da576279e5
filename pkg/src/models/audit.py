"""
Verification, constants and overlap audit models.
"""

from typing import Any, Dict, List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field

from src.config.constants import SCHEMA_VERSION
from src.models.density import FamilyOptimum


class CheckResult(BaseModel):
    """
    Outcome of one verification check.

    Serialized with the key "pass" for the verdict.
    """

    model_config = ConfigDict(populate_by_name=True)

    name: str = Field(..., description="Check identifier")
    value: float = Field(..., description="Measured residual or value")
    threshold: float = Field(..., description="Acceptance threshold")
    passed: bool = Field(..., serialization_alias="pass", description="Verdict")
    detail: str = Field("", description="Human-readable context")


class OverlapAudit(BaseModel):
    """Pairwise gaps and facet clearances of a 24-horoball arrangement."""

    min_pair_offset: float = Field(..., description="Smallest signed gap over all 276 pairs")
    min_pair: Tuple[int, int] = Field(..., description="Vertex pair attaining the smallest gap")
    tangent_pairs: int = Field(..., ge=0, description="Pairs with |gap| below tolerance")
    min_facet_clearance: float = Field(..., description="Smallest facet clearance")
    min_clearance_ball: int = Field(..., description="Vertex attaining the smallest clearance")
    ball_clearances: List[float] = Field(
        default_factory=list, description="Smallest clearance per vertex, A1..A24"
    )
    facet_clearances: List[List[float]] = Field(
        default_factory=list, description="Clearances to the 18 non-incident facets per vertex"
    )
    valid: bool = Field(..., description="Gaps and clearances respect the tolerance")


class ConstantRow(BaseModel):
    """Derived constant next to its reference decimal."""

    name: str
    derived: float
    reference: Optional[float] = None
    difference: Optional[float] = None
    discrepancy: bool = False
    note: str = ""


class ConstantsTable(BaseModel):
    """Table of derived constants."""

    schema_version: str = SCHEMA_VERSION
    rows: List[ConstantRow] = Field(default_factory=list)

    def as_dict(self) -> Dict[str, float]:
        return {row.name: row.derived for row in self.rows}


class McReport(BaseModel):
    """Monte Carlo estimate of one sector volume against the exact value."""

    vertex: int
    flag: int
    offset: float
    samples: int
    seed: int
    exact: float
    estimate: float
    std_error: float
    sigma_distance: float


class VerificationAudit(BaseModel):
    """Full verification run."""

    schema_version: str = SCHEMA_VERSION
    config: Dict[str, Any] = Field(default_factory=dict)
    checks: List[CheckResult] = Field(default_factory=list)
    constants: Dict[str, float] = Field(default_factory=dict)
    residual_matrix: Dict[str, List[float]] = Field(default_factory=dict)
    overlap: Dict[str, float] = Field(default_factory=dict)
    monte_carlo: List[McReport] = Field(default_factory=list)
    partial: bool = False
    test_mode: bool = False

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)

    @property
    def failing(self) -> List[str]:
        return [check.name for check in self.checks if not check.passed]


class RegimeRow(BaseModel):
    """One row of the largest-horoball regime table."""

    regime: int
    upper_bound: float
    upper_bound_label: str
    optimal_density: float


class Cell24Dump(BaseModel):
    """Vertex table, neighbor-class matrix and incidence counts of the 24-cell."""

    schema_version: str = SCHEMA_VERSION
    vertices: List[List[float]]
    neighbor_class: List[List[int]]
    counts: Dict[str, int]
    neighbor_profile: List[int]


class PackingSummary(BaseModel):
    """Headline summary: family optima, regime table and the global optimum."""

    schema_version: str = SCHEMA_VERSION
    optima: List[FamilyOptimum] = Field(default_factory=list)
    regimes: List[RegimeRow] = Field(default_factory=list)
    global_optimum_arrangement: str
    global_optimum_density: float
    comparison_note: str
    reference_densities: Dict[str, float] = Field(default_factory=dict)
