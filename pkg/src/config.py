"""
Configuration constants for the magic-rcm simulator
"""

import math

# Numerical tolerances
STRUCTURAL_TOL = 1e-12   # Hermiticity, unit trace, unitarity
IDENTITY_TOL = 1e-10     # derived identities (Pauli completeness, oracle equivalence)
EIGENVALUE_FLOOR = -1e-10
PROB_SUM_TOL = 1e-9
PROB_CLAMP_TOL = 1e-12
CALIBRATION_COLUMN_TOL = 1e-9
FACTORIZATION_TOL = 1e-9

# Randomized Clifford Measurement defaults
DEFAULT_N_RAND = 400
DEFAULT_N_SHOT = 5000
SINGLE_QUBIT_CLIFFORDS = 24

# Least-squares readout mitigation
MITIGATION_MAX_ITER = 100_000
MITIGATION_TOL = 1e-12
POWER_ITERATION_STEPS = 200

# Erasure optimizer
ERASURE_TOL = 1e-8
ERASURE_MAX_EVALUATIONS = 5000
ERASURE_REAL_GRID_DEG = 15.0
ERASURE_FULL_GRID_DEG = 45.0
ERASURE_RESTARTS = 4

# Benchmark fitting
RB_PHYSICAL_GATES_PER_CLIFFORD = 1.875
RB_MAX_FIT_ITER = 200

# Noise calibration used by the reproduction reports
TABLE1_TARGET_PURITY = 0.94
# Per-CZ survival probability fitted once so that the Rz-only landscape of the
# M state bottoms out at 0.29; frozen afterwards.
FIG4_P_DEP_CZ = math.sqrt(0.90)
FIG4_GRID_STEP_DEG = 7.5
FIG4_ANCHOR = 0.29
FIG4_ANCHOR_TOL = 0.01

# Theory anchors: (purity, magic) per prepared state
TABLE1_ANCHORS = {
    "LM": (0.94, 0.48),
    "LM_erased": (0.94, 0.08),
    "M": (0.94, 0.46),
    "M_erased": (0.94, 0.27),
}
TABLE1_PURITY_TOL = 0.02
TABLE1_MAGIC_TOL = 0.05
REPORT_SIGMA_MULTIPLIER = 3.0
FIG3_THETA_DEG = [5.0 * k for k in range(1, 10)]

# Scenario files
SCENARIO_SCHEMA_VERSION = 1
HTTP_TIMEOUT = 30.0

# Default HTTP server settings for `serve`
DEFAULT_HTTP_HOST = "0.0.0.0"  # Listen on all network interfaces
DEFAULT_HTTP_PORT = 8848

# CLI exit codes
EXIT_OK = 0
EXIT_ERROR = 1
EXIT_CHECK_FAILED = 2

# Error message templates
ERROR_DATASET_NOT_FOUND = "Dataset '{name}' not found. Available datasets: {available}"
ERROR_REPORT_NOT_FOUND = "Report '{name}' not found. Available reports: {available}"
ERROR_INVALID_SCENARIO = "Invalid scenario: {detail}"
ERROR_UNSUPPORTED_SCHEMA = "Unsupported scenario schema version {version} (expected {expected})"
ERROR_UNKNOWN_STATE = "Unknown state id '{state}'. Available states: {available}"
ERROR_FETCH_FAILED = "Failed to fetch URL: {detail}"
ERROR_PARSE_FAILED = "Failed to parse document: {detail}"
ERROR_COMPUTATION = "{kind}: {detail}"
ERROR_UNEXPECTED = "Unexpected error: {detail}"
