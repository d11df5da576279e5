"""
Configuration management for horoball24.

Settings are a tree of dataclasses stored as JSON. Values are checked
against the same rules the command line applies; a bad value is replaced
by its default when loaded and refused when set.
"""

import json
import math
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

from src.config.constants import (
    APP_VERSION,
    CONFIG_FILE,
    CSV_DIGITS,
    DEFAULT_GRID,
    DEFAULT_LOG_LEVEL,
    DEFAULT_MC_SAMPLES,
    DEFAULT_OUTPUT_FORMAT,
    DEFAULT_SEED,
    DEFAULT_WORKERS,
    MC_CHUNKS,
    ORACLE_DENSITY_TOLERANCE,
    PACKING_TOLERANCE,
)
from src.utils.file_ops import read_text
from src.utils.logger import get_logger
from src.utils.validators import validate_grid, validate_mc_samples, validate_output_format

logger = get_logger(__name__)

LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL")

# Doubles carry at most 17 significant digits
MAX_CSV_DIGITS = 17


@dataclass
class NumericsConfig:
    """Acceptance tolerances of the verification suite."""

    packing_tolerance: float = PACKING_TOLERANCE
    oracle_density_tolerance: float = ORACLE_DENSITY_TOLERANCE


@dataclass
class OracleConfig:
    """Monte Carlo and parallelism settings."""

    mc_samples: int = DEFAULT_MC_SAMPLES
    seed: int = DEFAULT_SEED
    workers: int = DEFAULT_WORKERS
    mc_chunks: int = MC_CHUNKS


@dataclass
class OutputConfig:
    """Report output settings."""

    grid: int = DEFAULT_GRID
    output_format: str = DEFAULT_OUTPUT_FORMAT
    csv_digits: int = CSV_DIGITS


@dataclass
class AdvancedConfig:
    """Advanced settings configuration."""

    log_level: str = DEFAULT_LOG_LEVEL
    log_to_file: bool = False


@dataclass
class AppConfig:
    """Main application configuration."""

    version: str = APP_VERSION
    numerics: NumericsConfig = field(default_factory=NumericsConfig)
    oracle: OracleConfig = field(default_factory=OracleConfig)
    output: OutputConfig = field(default_factory=OutputConfig)
    advanced: AdvancedConfig = field(default_factory=AdvancedConfig)


SECTIONS = ("numerics", "oracle", "output", "advanced")


def _is_count(value: Any, minimum: int) -> bool:
    return isinstance(value, int) and not isinstance(value, bool) and value >= minimum


def _is_number(value: Any) -> bool:
    return (
        isinstance(value, (int, float))
        and not isinstance(value, bool)
        and math.isfinite(value)
    )


# (section, field) -> (check, message)
_RULES = {
    ("numerics", "packing_tolerance"): (
        lambda v: _is_number(v) and v <= 0.0,
        "must be a number <= 0",
    ),
    ("numerics", "oracle_density_tolerance"): (
        lambda v: _is_number(v) and v > 0.0,
        "must be a number > 0",
    ),
    ("oracle", "mc_samples"): (validate_mc_samples, "is below the Monte Carlo minimum"),
    ("oracle", "seed"): (lambda v: _is_count(v, 0), "must be an integer >= 0"),
    ("oracle", "workers"): (lambda v: _is_count(v, 1), "must be an integer >= 1"),
    ("oracle", "mc_chunks"): (lambda v: _is_count(v, 1), "must be an integer >= 1"),
    ("output", "grid"): (validate_grid, "must be an integer >= 2"),
    ("output", "output_format"): (
        lambda v: isinstance(v, str) and validate_output_format(v),
        "must be json, csv or markdown",
    ),
    ("output", "csv_digits"): (
        lambda v: _is_count(v, 1) and v <= MAX_CSV_DIGITS,
        f"must be an integer in 1..{MAX_CSV_DIGITS}",
    ),
    ("advanced", "log_level"): (
        lambda v: isinstance(v, str) and v.upper() in LOG_LEVELS,
        f"must be one of {', '.join(LOG_LEVELS)}",
    ),
}


def config_problems(config: AppConfig) -> List[Tuple[str, str, str]]:
    """
    Check every setting against the command-line rules.

    Args:
        config: Settings to check

    Returns:
        (section, field, message) for each rejected value, in declaration order
    """
    problems = []
    for section in SECTIONS:
        values = getattr(config, section)
        for f in fields(values):
            rule = _RULES.get((section, f.name))
            if rule is None:
                continue
            check, message = rule
            value = getattr(values, f.name)
            if not check(value):
                problems.append((section, f.name, f"{section}.{f.name}={value!r} {message}"))
    return problems


def _config_from_dict(data: Dict[str, Any]) -> AppConfig:
    """Build an AppConfig from its JSON dictionary form."""
    return AppConfig(
        version=data.get("version", APP_VERSION),
        numerics=NumericsConfig(**data.get("numerics", {})),
        oracle=OracleConfig(**data.get("oracle", {})),
        output=OutputConfig(**data.get("output", {})),
        advanced=AdvancedConfig(**data.get("advanced", {})),
    )


def _repair(config: AppConfig) -> AppConfig:
    """Replace rejected values by their defaults, logging each one."""
    defaults = AppConfig()
    for section, name, message in config_problems(config):
        default = getattr(getattr(defaults, section), name)
        logger.warning(f"Setting {message}; using default {default!r}")
        setattr(getattr(config, section), name, default)
    return config


class SettingsManager:
    """
    Manage application configuration.

    Handles loading, saving, and accessing configuration settings.
    With create_missing, a missing file is written with defaults; without
    it the manager never writes on its own.
    """

    def __init__(self, config_path: Optional[Path] = None, create_missing: bool = True):
        """
        Initialize settings manager.

        Args:
            config_path: Path to configuration file. Defaults to CONFIG_FILE.
            create_missing: Write a default file when none exists
        """
        self.config_path = Path(config_path) if config_path else CONFIG_FILE
        self.create_missing = create_missing
        self.config = AppConfig()
        self.load()

    def load(self) -> bool:
        """
        Load configuration from file.

        Returns:
            True if the file was read (possibly with repaired values), False otherwise.
        """
        if not self.config_path.exists():
            if not self.create_missing:
                logger.warning(f"No settings file at {self.config_path}; using defaults")
                return False
            return self.save()

        text = read_text(self.config_path)
        if not text:
            return False
        try:
            self.config = _repair(_config_from_dict(json.loads(text.data)))
            return True
        except (json.JSONDecodeError, TypeError, AttributeError) as e:
            logger.warning(f"Failed to load config {self.config_path}: {e}")
            return False

    def save(self) -> bool:
        """
        Save configuration to file.

        Returns:
            True if successful, False otherwise.
        """
        return self._write(self.config_path)

    def _write(self, path: Path) -> bool:
        try:
            path.parent.mkdir(parents=True, exist_ok=True)
            with open(path, "w", encoding="utf-8") as f:
                json.dump(asdict(self.config), f, indent=2)
            return True
        except (OSError, TypeError) as e:
            logger.warning(f"Failed to write config {path}: {e}")
            return False

    def validate(self) -> List[str]:
        """Messages for every value the command line would reject."""
        return [message for _, _, message in config_problems(self.config)]

    def get(self, key: str, default: Any = None) -> Any:
        """
        Get configuration value by dot-notation key.

        Args:
            key: Configuration key in dot notation (e.g., "oracle.seed")
            default: Default value if key not found

        Returns:
            Configuration value or default
        """
        value: Any = self.config
        for k in key.split("."):
            if not hasattr(value, k):
                return default
            value = getattr(value, k)
        return value

    def set(self, key: str, value: Any) -> bool:
        """
        Set a value by "section.field" key and save.

        Args:
            key: Configuration key in dot notation
            value: Value to set

        Returns:
            False for unknown keys and rejected values, which leave the config unchanged
        """
        section_name, _, name = key.partition(".")
        if section_name not in SECTIONS or not name:
            return False
        section = getattr(self.config, section_name)
        if not hasattr(section, name):
            return False

        previous = getattr(section, name)
        setattr(section, name, value)
        rejected = [m for s, n, m in config_problems(self.config) if (s, n) == (section_name, name)]
        if rejected:
            setattr(section, name, previous)
            logger.warning(f"Refused setting {rejected[0]}")
            return False
        return self.save()

    def reset_to_defaults(self) -> None:
        """Reset configuration to defaults."""
        self.config = AppConfig()
        self.save()

    def export_config(self, destination: Path) -> bool:
        """
        Export configuration to file.

        Args:
            destination: Path to export configuration to

        Returns:
            True if successful, False otherwise
        """
        return self._write(Path(destination))

    def import_config(self, source: Path) -> bool:
        """
        Import configuration from file and save it.

        Args:
            source: Path to import configuration from

        Returns:
            True if successful, False otherwise
        """
        text = read_text(source)
        if not text:
            return False
        try:
            self.config = _repair(_config_from_dict(json.loads(text.data)))
            return self.save()
        except (json.JSONDecodeError, TypeError, AttributeError) as e:
            logger.warning(f"Failed to import config: {e}")
            return False
