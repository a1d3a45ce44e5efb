"""
Centralized Configuration — iterfix
All tuneable parameters live here so they can be adjusted without touching
the numerical code.  Library dataclasses take their defaults from these
constants; the CLI passes overrides explicitly, except --max-degree, which
is set on this module for the duration of one command and then restored.
"""

import logging
import os

import psutil

logger = logging.getLogger(__name__)

# ── Polynomial arithmetic ────────────────────────────────────────────────────
MAX_DEGREE: int = 4096                  # guard for d**n blow-up in compose/iterate
LEADING_ZERO_THRESHOLD: float = 1e-300  # trailing coefficients at or below are stripped

# ── Root finding ─────────────────────────────────────────────────────────────
MAX_ITERATIONS: int = 200               # Aberth sweeps per attempt
RESIDUAL_TOL: float = 1e-12             # relative to the coefficient scale
CLUSTER_RADIUS: float = 1e-6            # single-linkage merge distance
NEWTON_POLISH_STEPS: int = 3
RESTART_PERTURBATION: float = 1e-3      # relative change of the initial circle radius
INITIAL_ANGLE_OFFSET: float = 0.4       # rad, breaks symmetry of the initial circle
POLISH_REACH: float = 10.0              # polish never moves farther than this × cluster radius

# ── Dynamics ─────────────────────────────────────────────────────────────────
FIXPOINT_TOL: float = 1e-8              # |p^n(ξ) − ξ| acceptance, also cycle matching
CLASSIFY_TOL: float = 1e-9              # band around |λ| = 1 treated as indifferent
PARABOLIC_TOL: float = 1e-4             # multiple roots must have |λ − 1| below this

# ── Identities ───────────────────────────────────────────────────────────────
DEFAULT_W_SAMPLES: tuple = (0j, 1 + 1j, -2 + 0j)
C_AGREEMENT_TOL: float = 1e-6           # pairwise agreement of c across w-samples
TRACE_PASS_TOL: float = 1e-6            # relative residual accepted by `trace`
RE_C2_TOL: float = 1e-10

# ── Bounds ───────────────────────────────────────────────────────────────────
VIOLATION_TOL: float = 1e-6
STRICTNESS_TOL: float = 1e-6
SCAN_RADIUS: float = 2.0                # free coefficients uniform in this disk
REVERIFY_RESIDUAL_TOL: float = 1e-14
REVERIFY_POLISH_STEPS: int = 10
ORACLE_AGREEMENT_TOL: float = 1e-6      # re-verification vs. quadratic closed form

# ── Search ───────────────────────────────────────────────────────────────────
SEARCH_STARTS: int = 64
SEARCH_ITERS: int = 400
SIMPLEX_INIT_SCALE: float = 0.3
OBJECTIVE_TOL: float = 1e-7             # stop when the simplex diameter drops below
DOMAIN_RADIUS: float = 2.0
PENALTY: float = 1e12                   # objective value on solver failure
FLOOR_SLACK: float = 1e-3               # search passes when best ≥ floor − slack

# ── Parallelism ──────────────────────────────────────────────────────────────
THREADS_ENV_VAR: str = "ITERFIX_THREADS"

# ── Logging ──────────────────────────────────────────────────────────────────
LOG_LEVEL: str = "WARNING"
LOG_FORMAT: str = "%(asctime)s [%(levelname)s] %(name)s — %(message)s"
LOG_DATE_FORMAT: str = "%Y-%m-%d %H:%M:%S"


def worker_count() -> int:
    """
    Return the number of worker threads for scans and searches.

    Honours ITERFIX_THREADS when it holds a positive integer; otherwise uses
    the logical CPU count reported by psutil.
    """
    raw = os.environ.get(THREADS_ENV_VAR)
    if raw:
        try:
            value = int(raw)
            if value >= 1:
                return value
        except ValueError:
            pass
        logger.warning("Ignoring invalid %s=%r", THREADS_ENV_VAR, raw)
    return psutil.cpu_count(logical=True) or 1
