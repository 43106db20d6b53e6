"""Constants for the edgesplit solver."""

# Instance document keys
CONF_PARAMS = "params"
CONF_LEVELS = "levels"
CONF_FUSION = "fusion"
CONF_SOLVER = "solver"
CONF_Q = "q"
CONF_G = "g"
CONF_PHI = "phi"
CONF_FAMILY = "family"
CONF_COEFFS = "coeffs"
CONF_POINTS = "points"
CONF_MAP_PRE = "mAP_pre"

# System parameter keys, in document order
PARAM_BANDWIDTH = "B"
PARAM_UPLINK_EFFICIENCY = "S_u"
PARAM_DOWNLINK_EFFICIENCY = "S_d"
PARAM_FRAME_RATE = "N"
PARAM_FRAME_SIZE = "F"
PARAM_TOTAL_TIME = "T_total"
PARAM_MAX_PARAMS = "M_max"
PARAM_PARAM_BITS = "b"
PARAM_KEYS = (
    PARAM_BANDWIDTH,
    PARAM_UPLINK_EFFICIENCY,
    PARAM_DOWNLINK_EFFICIENCY,
    PARAM_FRAME_RATE,
    PARAM_FRAME_SIZE,
    PARAM_TOTAL_TIME,
    PARAM_MAX_PARAMS,
    PARAM_PARAM_BITS,
)

# Uplink performance families g_j(rho)
G_FAMILY_QUADRATIC = "quadratic"
G_FAMILY_LOG_SATURATION = "log_saturation"
G_FAMILY_EXP_SATURATION = "exp_saturation"
G_FAMILY_TABULATED = "tabulated"

# Fusion blending families phi(u)
PHI_FAMILY_POWER = "power"
PHI_FAMILY_EXP_SATURATION = "exp_saturation"
PHI_FAMILY_IDENTITY = "identity"

# Constraint identifiers, as numbered in the allocation problem
CONSTRAINT_RHO_AND_LEVEL = "7b"
CONSTRAINT_TIME_BUDGET = "7c"
CONSTRAINT_UPLINK = "7d"
CONSTRAINT_DOWNLINK = "7e"
CONSTRAINT_PARAM_COUNT = "7f"

# Tolerances
CONSTRAINT_TOLERANCE = 1e-9  # after normalising by constraint scale
CONCAVITY_TOLERANCE = 1e-9
RANGE_TOLERANCE = 1e-12
SHAPE_SAMPLE_POINTS = 1001
ARGMAX_TOLERANCE = 1e-10
CROSSING_TOLERANCE = 1e-9  # relative to M_hi
KNOT_MERGE_TOLERANCE = 1e-12  # relative to M_hi

# Solver options
DEFAULT_SEGMENT_SAMPLES = 512
MIN_SEGMENT_SAMPLES = 8
MAX_SEGMENT_SAMPLES = 100_000
DEFAULT_CROSSING_SCAN_POINTS = 4096
MIN_CROSSING_SCAN_POINTS = 16
MAX_CROSSING_SCAN_POINTS = 1_000_000
DEFAULT_REFINE_TOLERANCE = 1e-6  # relative to M_hi
MIN_REFINE_TOLERANCE = 1e-12
MAX_REFINE_TOLERANCE = 1e-2
DEFAULT_ORACLE_BUDGET = 100_000_000

# Sweeps
SWEEP_PARAMS = (
    PARAM_BANDWIDTH,
    PARAM_FRAME_RATE,
    PARAM_TOTAL_TIME,
    PARAM_MAX_PARAMS,
)
BASELINE_NONE_UPDATE = "none-update"
BASELINE_FIXED_STRATEGY = "fixed-strategy"
BASELINE_ALIASES = {
    "none": BASELINE_NONE_UPDATE,
    BASELINE_NONE_UPDATE: BASELINE_NONE_UPDATE,
    "fixed": BASELINE_FIXED_STRATEGY,
    BASELINE_FIXED_STRATEGY: BASELINE_FIXED_STRATEGY,
}
DEFAULT_FIXED_RHO = 0.5
DEFAULT_SWEEP_CONCURRENCY = 4
MAX_SWEEP_CONCURRENCY = 64

STATUS_OK = "ok"
STATUS_INVALID = "invalid"
STATUS_DEGENERATE = "degenerate"
STATUS_ERROR = "error"

# Environment
ENV_LOG_LEVEL = "EDGESPLIT_LOG_LEVEL"
ENV_SWEEP_CONCURRENCY = "EDGESPLIT_SWEEP_CONCURRENCY"

# CLI exit codes
EXIT_OK = 0
EXIT_ERROR = 1
EXIT_INVALID = 2
EXIT_DEGENERATE = 3
