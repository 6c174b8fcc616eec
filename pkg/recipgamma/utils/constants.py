import os

"""
Environmental configuration
"""

# Worker count for replication-level parallelism; overrides --parallel when set
RECIPGAMMA_THREADS = os.getenv("RECIPGAMMA_THREADS")
# Package logger level (DEBUG, INFO, WARNING, ERROR)
RECIPGAMMA_LOG_LEVEL = os.getenv("RECIPGAMMA_LOG_LEVEL", "INFO")

"""
Internal Use
"""

# Chain lengths used by the simulation studies
DEFAULT_BURN_IN = 1000
DEFAULT_DRAWS = 4000
DEFAULT_REPLICATIONS = 100
DEFAULT_SEED = 20240501

# Stopping rule of the gamma-approximation fit: (eps, M_max)
AMH_EPS = 1e-8
AMH_MAX_ITER = 10

# Acceptance-boost levels of the gamma-model sampler
MAX_K_LEVELS = 10

# Smallest upper-tail mass a truncated gamma draw may start from
TAIL_MASS_FLOOR = 1e-300

# A replication batch fails once more than this fraction of replications fail
MAX_FAILED_FRACTION = 0.05

# Shortest series ess() accepts
MIN_ESS_LENGTH = 10

# Switch point between direct evaluation and the asymptotic series of the
# Stirling remainder
STIRLING_SERIES_THRESHOLD = 10.0

# Tolerances of the closed-form identity verifiers
IDENTITY_TOLERANCE = 1e-8
GAMMA_POWER_IDENTITY_TOLERANCE = 1e-9
