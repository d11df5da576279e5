"""
Density curve and regime data models.
"""

from enum import Enum
from typing import List

from pydantic import BaseModel, ConfigDict, Field

from src.config.constants import SCHEMA_VERSION


class FamilyName(str, Enum):
    """One-parameter horoball packing families."""

    B01 = "b01"
    B12 = "b12"
    B13 = "b13"
    B04 = "b04"


class DensitySample(BaseModel):
    """One point of a density curve."""

    model_config = ConfigDict(frozen=True)

    x: float = Field(..., description="Family parameter")
    delta: float = Field(..., description="Closed-form density at x")


class DensityReport(BaseModel):
    """
    Evaluated density curve of a family with its maximum.

    oracle_residual is |closed form - from-scratch density| at the argmax.
    """

    family: FamilyName = Field(..., description="Packing family")
    x_max: float = Field(..., description="Right end of the parameter domain")
    samples: List[DensitySample] = Field(default_factory=list, description="Grid samples")
    argmax_x: float = Field(..., description="Parameter of the maximal density")
    max_density: float = Field(..., description="Maximal density")
    oracle_residual: float = Field(..., ge=0, description="Oracle residual at the argmax")


class RegimeResult(BaseModel):
    """Regime of the largest horoball sector volume with its optimal density."""

    regime: int = Field(..., ge=1, le=3, description="Regime 1, 2 or 3")
    optimal_density: float = Field(..., description="Optimal density in the regime")
    lower_bound: float = Field(..., description="Exclusive lower bound of sector volume")
    upper_bound: float = Field(..., description="Inclusive upper bound of sector volume")


class SweepRow(BaseModel):
    """Closed form against oracle at one grid point."""

    x: float
    delta_closed: float
    delta_oracle: float
    residual: float


class SweepResult(BaseModel):
    """Density sweep over a uniform grid of a family's domain."""

    schema_version: str = SCHEMA_VERSION
    family: FamilyName
    grid: int = Field(..., ge=2)
    x_max: float
    rows: List[SweepRow] = Field(default_factory=list)


class FamilyOptimum(BaseModel):
    """Headline optimum of one family."""

    family: FamilyName
    argmax_x: float
    max_density: float
    oracle_residual: float
    endpoint_arrangement: str = Field(..., description="Named arrangement at the argmax")


class OptimizeResult(BaseModel):
    """Reports of one or more optimized families."""

    schema_version: str = SCHEMA_VERSION
    grid: int
    reports: List[DensityReport] = Field(default_factory=list)
