"""
Application constants, numeric tolerances and default paths.
"""

import math
from pathlib import Path

# Application Info
APP_NAME = "horoball24"
APP_VERSION = "0.1.0"

# Directory Paths
CONFIG_DIR = Path.home() / ".horoball24"
CONFIG_FILE = CONFIG_DIR / "config.json"
LOG_DIR = CONFIG_DIR / "logs"

# Output schema
SCHEMA_VERSION = "1"

# Tolerance ladder
IDEAL_TOLERANCE = 1e-10  # |<x,x>| after x0 = 1 normalization
COMBINATORIAL_TOLERANCE = 1e-9  # spatial dot-product thresholds of the 24-cell
INCIDENCE_TOLERANCE = 1e-10  # incidence and tangency
CLOSED_FORM_TOLERANCE = 1e-12
ORACLE_DENSITY_TOLERANCE = 1e-5
PACKING_TOLERANCE = -1e-9  # lower bound for gaps and facet clearances
RELATION_TOLERANCE = 1e-12  # |g| = 0 and |g| = 1 branch boundaries of pair_relation
GOLDEN_SECTION_TOLERANCE = 1e-12

# Source decimals used as acceptance anchors
REFERENCE_DELTA_B0 = 0.60793
REFERENCE_DELTA_OPTIMUM = 0.71645
REFERENCE_V0_DECIMAL = 0.00694
REFERENCE_V0_DISPLAY = math.sqrt(2.0) / 216.0 * math.sinh(0.5 * math.acosh(11.0 / 8.0))
REFERENCE_RHO1 = 0.34657
REFERENCE_RHO3 = 0.60199
REFERENCE_RHO3_DISPLAY = math.log(10.0 / 3.0)
REFERENCE_RHO4 = 0.45815
REFERENCE_B04_XMAX = 0.54931
REFERENCE_DELTA_B04_XMAX = 0.497
DENSITY_ANCHOR_TOLERANCE = 5e-5

# Densities quoted for comparison only, never computed
REFERENCE_DENSITIES = {
    "simplicial_bound_h2": 3.0 / math.pi,
    "simplicial_bound_h3": 0.85328,
    "simplicial_bound_h4": 0.73046,
    "locally_optimal_simplex_h4": 0.77038,
    "known_densest_h4": 0.71645,
}

# Characteristic simplex Coxeter weights of the {3,4,3,4} honeycomb
SCHLAFLI_WEIGHTS = (3, 4, 3, 4)

# CLI defaults
DEFAULT_GRID = 101
DEFAULT_MC_SAMPLES = 1_000_000
MIN_MC_SAMPLES = 10_000
DEFAULT_SEED = 24
DEFAULT_OUTPUT_FORMAT = "json"
# Significant digits of CSV floats
CSV_DIGITS = 10
VERIFY_ORACLE_GRID = 11
VERIFY_VALIDITY_GRID = 21
VERIFY_IDENTITY_GRID = 101

# Concurrency
DEFAULT_WORKERS = 4
MC_CHUNKS = 8
MC_LOWER_HEIGHT_FACTOR = 0.8  # importance sampling starts below the horosphere

# Logging
DEFAULT_LOG_LEVEL = "WARNING"
LOG_FILE_NAME = "horoball24.log"
LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - [%(run)s] %(message)s"
LOG_MAX_BYTES = 10 * 1024 * 1024  # 10 MB
LOG_BACKUP_COUNT = 5
