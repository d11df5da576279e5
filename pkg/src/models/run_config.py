"""
Command-line run configuration model.
"""

from enum import Enum
from pathlib import Path
from typing import Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator

from src.config.constants import (
    DEFAULT_GRID,
    DEFAULT_MC_SAMPLES,
    DEFAULT_SEED,
    DEFAULT_WORKERS,
    MIN_MC_SAMPLES,
)
from src.models.density import FamilyName


class Command(str, Enum):
    """CLI subcommands."""

    CONSTANTS = "constants"
    DUMP = "dump"
    SWEEP = "sweep"
    OPTIMIZE = "optimize"
    VERIFY = "verify"
    REPORT = "report"


class OutputFormat(str, Enum):
    """Output encodings."""

    JSON = "json"
    CSV = "csv"
    MARKDOWN = "markdown"


class RunConfig(BaseModel):
    """
    One CLI invocation after merging the settings file and flags.

    Fields that do not apply to a command are ignored by it.
    """

    command: Command = Field(..., description="Subcommand to run")
    family: Optional[FamilyName] = Field(None, description="Packing family")
    grid: int = Field(DEFAULT_GRID, description="Grid points over the family domain")
    mc_samples: int = Field(DEFAULT_MC_SAMPLES, description="Monte Carlo samples per configuration")
    seed: int = Field(DEFAULT_SEED, description="Monte Carlo root seed")
    output_format: OutputFormat = Field(OutputFormat.JSON, description="Output encoding")
    output_path: Optional[Path] = Field(None, description="Output file; stdout when omitted")
    workers: int = Field(DEFAULT_WORKERS, ge=1, description="Worker threads")
    perturb_v0: Optional[float] = Field(None, gt=0, description="V0 factor for fault injection")
    skip_mc: bool = Field(False, description="Skip the Monte Carlo checks")

    model_config = ConfigDict(frozen=True)

    @field_validator("grid")
    @classmethod
    def check_grid(cls, value: int) -> int:
        if value < 2:
            raise ValueError(f"grid must be at least 2, got {value}")
        return value

    @field_validator("mc_samples")
    @classmethod
    def check_mc_samples(cls, value: int) -> int:
        if value < MIN_MC_SAMPLES:
            raise ValueError(f"mc_samples must be at least {MIN_MC_SAMPLES}, got {value}")
        return value

    @property
    def test_mode(self) -> bool:
        """True when V0 is perturbed for fault injection."""
        return self.perturb_v0 is not None
