import math

# Maximum of |Det| on normalized four-qubit states
MAX_ABS_DET = 3.0 ** -9

# omega = e^{i pi/3}
OMEGA = complex(0.5, math.sqrt(3.0) / 2.0)

# Thresholds shared across modules
ZERO_RADIUS = 1e-9
RANK_RELATIVE_THRESHOLD = 1e-9
CONSTRAINT_TOLERANCE = 1e-9
CALIBRATION_TOLERANCE = 1e-9
CALIBRATION_MIN_DENOMINATOR = 1e-30
NORMALIZED_TOLERANCE = 1e-12

# Probe used to pin the Schlafli normalization to the restriction formula
CALIBRATION_PROBE = (1.0, 2.0, 3.0, 4.0)
CALIBRATION_SAMPLES = 50
CALIBRATION_SEED = 20120515

# Restart perturbation scale around the known configuration
RESTART_PERTURBATION = 0.3

# Entry scales for random determinant-one probes
SL_PROBE_SCALES = (0.1, 0.5, 1.0)

# Digits used for surd-valued constants
MP_DIGITS = 50
MP_TOLERANCE = 1e-30

DEFAULT_SEED = 0
DEFAULT_RESTARTS = 50
DEFAULT_TOL = 1e-12
DEFAULT_N7_RESTARTS = 200
DEFAULT_LU_RESTARTS = 64
