"""Constants used throughout the meanfield package."""

import math
from pathlib import Path

# Application Information
APP_NAME = "MEANFIELD"
APP_FULL_NAME = "Mean-field maxima Monte Carlo"
ENV_PREFIX = "MEANFIELD_"

# Logging
LOG_FILE_NAME = "meanfield.log"
LOG_MAX_BYTES = 10 * 1024 * 1024
LOG_BACKUP_COUNT = 3

# Template Paths (absolute)
TEMPLATE_DIR = Path(__file__).parent.parent / "diagnostics" / "templates"
HISTOGRAM_SVG_TEMPLATE = TEMPLATE_DIR / "histogram.svg.j2"

# Report schema
REPORT_SCHEMA_VERSION = "1.0"

# Step sizes per profile
PROFILE_STEPS = {
    "paper": 1e-4,
    "fast": 1e-3,
}
DEFAULT_PROFILE = "paper"

# Random streams
DEFAULT_RNG_ALGORITHM = "philox"
DEFAULT_BASE_SEED = 20240601

# Limit law
DEFAULT_ODE_STEP = 1e-4
DEFAULT_HERMITE_ORDER = 64
HERMITE_CHECK_ORDER = 128
HERMITE_CHECK_TOLERANCE = 1e-10
LAW_CACHE_SIZE = 32

# Extremes
MIN_NORMALIZER_N = 5
LOG_4PI = math.log(4.0 * math.pi)

# Kolmogorov asymptotic critical values (coefficient over sqrt(R))
KS_CRIT_COEFF_5 = 1.358
KS_CRIT_COEFF_1 = 1.628

# Histogram
DEFAULT_BIN_WIDTH = 0.1

# Default population sizes for the verification suites
TAU_STUDY_SIZES = (50, 200, 800, 3200)
MOMENT_STUDY_SIZES = (250, 1000)
RATIO_STUDY_SIZES = (200, 800, 3200)

# Verification pass bands
TAU_SLOPE_BAND = (-0.65, -0.35)
STRONG_ORDER_RATIO_BAND = (1.2, 1.7)
RATIO_THRESHOLD = 0.02

# Exit codes
EXIT_OK = 0
EXIT_CRITERIA_FAILED = 1
EXIT_CONFIG_ERROR = 2
EXIT_RUNTIME_ERROR = 3

# Terminal styling
COLOR_SUCCESS = "green"
COLOR_ERROR = "red"
COLOR_WARNING = "yellow"
COLOR_INFO = "blue"
COLOR_HEADING = "bold cyan"
SYMBOL_PASS = "✓"
SYMBOL_FAIL = "✗"
SYMBOL_WARNING = "⚠"
