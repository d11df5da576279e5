"""
Validation utilities for command-line input.
"""

import math
from typing import Optional

from src.config.constants import MIN_MC_SAMPLES
from src.models.density import FamilyName
from src.models.run_config import OutputFormat


def validate_family_name(name: str) -> bool:
    """
    Validate a packing family name.

    Args:
        name: Name to validate (case-insensitive)

    Returns:
        True if it names b01, b12, b13 or b04
    """
    if not name:
        return False
    return name.strip().lower() in {f.value for f in FamilyName}


def validate_grid(grid: int) -> bool:
    """Grids need both endpoints of the domain."""
    return isinstance(grid, int) and grid >= 2


def validate_mc_samples(samples: int) -> bool:
    return isinstance(samples, int) and samples >= MIN_MC_SAMPLES


def validate_output_format(fmt: str) -> bool:
    if not fmt:
        return False
    return fmt.strip().lower() in {f.value for f in OutputFormat}


def validate_perturbation(factor: Optional[float]) -> bool:
    """
    Validate a V0 fault-injection factor.

    Args:
        factor: Multiplier applied to V0, or None for no perturbation

    Returns:
        True if absent or a finite positive number
    """
    if factor is None:
        return True
    return math.isfinite(factor) and factor > 0
