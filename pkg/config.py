from dotenv import load_dotenv
import os

# Load environment overrides when a local env file is present
if os.path.exists("mink.env"):
    load_dotenv("mink.env")

VERSION = "0.3.0"

# Cache location for computed Jacobi matrices
MINK_CACHE_DIR = os.path.expanduser(os.getenv("MINK_CACHE_DIR", "~/.cache/mink"))
CACHE_FILE_NAME = os.getenv("MINK_CACHE_FILE", "minkowski.tsv")
CACHE_HEADER = "# minkowski-jacobi v1"

MINK_LOG_LEVEL = os.getenv("MINK_LOG_LEVEL", "INFO").upper()

# Fixed-point iteration
DEFAULT_EPS = float(os.getenv("MINK_EPS", "1e-12"))
MAX_ITERS_CAP = int(os.getenv("MINK_MAX_ITERS_CAP", "20000"))
MIN_BUFFER = int(os.getenv("MINK_MIN_BUFFER", "32"))
PARALLEL_PUSHFORWARD = os.getenv("MINK_PARALLEL", "0").lower() in ("1", "true", "yes")
LOG_EVERY = int(os.getenv("MINK_LOG_EVERY", "25"))
# Extra iterations at the fixed point sampled for the per-row spread (0 disables)
STAT_WINDOW = int(os.getenv("MINK_STAT_WINDOW", "8"))

# Linear algebra and quadrature
BREAKDOWN_TOL = float(os.getenv("MINK_BREAKDOWN_TOL", "1e-14"))
RENORM_THRESHOLD = float(os.getenv("MINK_RENORM_THRESHOLD", "1e100"))

# Question-mark function evaluation on floating-point input
Q_GUARD_BITS = int(os.getenv("MINK_Q_GUARD_BITS", "64"))
Q_DIGIT_CAP = int(os.getenv("MINK_Q_DIGIT_CAP", str(10 ** 6)))
MAX_GRAPH_LEVEL = int(os.getenv("MINK_MAX_GRAPH_LEVEL", "22"))

# Farey cusp validation band, in natural-log units
CUSP_SLACK = float(os.getenv("MINK_CUSP_SLACK", "2.0"))

assert DEFAULT_EPS > 0, "MINK_EPS must be positive"
assert RENORM_THRESHOLD > 1e10, "MINK_RENORM_THRESHOLD is too small to be useful"
assert MAX_ITERS_CAP > 0, "MINK_MAX_ITERS_CAP must be positive"
assert MIN_BUFFER >= 0, "MINK_MIN_BUFFER must be non-negative"
assert STAT_WINDOW == 0 or STAT_WINDOW >= 2, "MINK_STAT_WINDOW must be 0 or at least 2"
