"""
Bound Checks — iterfix

Compares the max-multiplier functional M_n(p) against the proved bound
M₂(p) ≥ 4 and the conjectured bounds M_n(p) ≥ 2ⁿ (flavor B) and
M_n(p) ≥ dⁿ (flavor C), one polynomial at a time or over random families.

Design:
  1. A failed check is only a candidate; it is recomputed at tightened
     tolerances (and against the quadratic closed form when d = 2, n = 2)
  2. Family scans are data-parallel with one generator per sample
  3. Samples whose root finding fails are counted as skipped
"""

from __future__ import annotations

import cmath
import enum
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

import config
from dynamics.periodic_points import PeriodicPoint, dominant_point, fixed_points
from errors import DegreeOverflow, DegreeTooLow, NoConvergence
from poly.polynomial import Polynomial, normalize
from rootfind.aberth import RootFindConfig

logger = logging.getLogger(__name__)


class Flavor(str, enum.Enum):
    THEOREM3 = "theorem3"
    B = "B"
    C = "C"


@dataclass(frozen=True)
class BoundReport:
    n: int
    d: int
    threshold: float
    observed_max: float
    margin: float
    witness: PeriodicPoint
    passed: bool
    flavor: Flavor
    polynomial: Polynomial


@dataclass(frozen=True)
class ScanSummary:
    """Aggregate of a family scan; the sampling measure is recorded verbatim."""

    d: int
    n: int
    flavor: Flavor
    sampling: str
    seed: int
    sample_count: int
    skipped: int
    min_observed_max: float
    min_margin: float
    argmin: Polynomial | None
    violations: tuple[tuple[Polynomial, BoundReport], ...]


def threshold_for(flavor: Flavor | str, d: int, n: int) -> float:
    flavor = Flavor(flavor)
    if flavor is Flavor.THEOREM3:
        return 4.0
    if flavor is Flavor.B:
        return float(2 ** n)
    return float(d ** n)


def _bound_report(
    p: Polynomial,
    n: int,
    flavor: Flavor,
    cfg: RootFindConfig | None,
    violation_tol: float | None,
) -> BoundReport:
    tol = config.VIOLATION_TOL if violation_tol is None else violation_tol
    witness = dominant_point(fixed_points(p, n, cfg))
    threshold = threshold_for(flavor, p.degree, n)
    margin = witness.abs_multiplier - threshold
    return BoundReport(
        n=n,
        d=p.degree,
        threshold=threshold,
        observed_max=witness.abs_multiplier,
        margin=margin,
        witness=witness,
        passed=margin >= -tol,
        flavor=flavor,
        polynomial=p,
    )


def check_theorem3(
    p: Polynomial,
    cfg: RootFindConfig | None = None,
    violation_tol: float | None = None,
) -> BoundReport:
    """M₂(p) against the proved threshold 4."""
    if p.degree < 2:
        raise DegreeTooLow("degree must be at least 2")
    return _bound_report(p, 2, Flavor.THEOREM3, cfg, violation_tol)


def check_conjecture(
    p: Polynomial,
    n: int,
    flavor: Flavor | str,
    cfg: RootFindConfig | None = None,
    violation_tol: float | None = None,
) -> BoundReport:
    """M_n(p) against 2ⁿ (flavor B) or dⁿ (flavor C)."""
    flavor = Flavor(flavor)
    if flavor is Flavor.THEOREM3:
        raise ValueError("use check_theorem3 for the proved bound")
    if p.degree < 2:
        raise DegreeTooLow("degree must be at least 2")
    if n < 2:
        raise ValueError(f"conjectures are stated for n >= 2, got {n}")
    return _bound_report(p, n, flavor, cfg, violation_tol)


def check_bound(p: Polynomial, n: int, flavor: Flavor | str,
                cfg: RootFindConfig | None = None) -> BoundReport:
    """Dispatch on flavor; theorem3 ignores *n*."""
    flavor = Flavor(flavor)
    if flavor is Flavor.THEOREM3:
        return check_theorem3(p, cfg)
    return check_conjecture(p, n, flavor, cfg)


# ---------------------------------------------------------------------------
# Re-verification
# ---------------------------------------------------------------------------

def quadratic_oracle(c: complex) -> list[complex]:
    """Multipliers of the four fixed points of (z² + c)²: (1 ± √(1−4c))², 4(c+1) twice."""
    s = cmath.sqrt(1 - 4 * complex(c))
    cycle = 4 * (complex(c) + 1)
    return [(1 + s) ** 2, (1 - s) ** 2, cycle, cycle]


def reverify(
    p: Polynomial,
    n: int,
    flavor: Flavor | str,
    cfg: RootFindConfig | None = None,
    violation_tol: float | None = None,
) -> tuple[BoundReport, bool]:
    """
    Recompute a failed check at tightened tolerances.

    Returns the tightened report and whether the violation survives.  For
    quadratics at n = 2 the pipeline value must also agree with the closed
    form, and the closed-form value must itself violate the threshold.
    """
    flavor = Flavor(flavor)
    tol = config.VIOLATION_TOL if violation_tol is None else violation_tol
    tight = replace(
        cfg or RootFindConfig(),
        residual_tol=config.REVERIFY_RESIDUAL_TOL,
        newton_polish_steps=config.REVERIFY_POLISH_STEPS,
    )
    n_eff = 2 if flavor is Flavor.THEOREM3 else n
    report = _bound_report(p, n_eff, flavor, tight, tol)
    survives = not report.passed

    if survives and p.degree == 2 and n_eff == 2:
        monic, _ = normalize(p)
        oracle_max = max(abs(m) for m in quadratic_oracle(monic.coeffs[0]))
        agrees = abs(oracle_max - report.observed_max) <= (
            config.ORACLE_AGREEMENT_TOL * max(1.0, oracle_max)
        )
        if not agrees:
            logger.warning("pipeline M_2=%.12g disagrees with closed form %.12g for %s",
                           report.observed_max, oracle_max, p)
        survives = agrees and oracle_max - report.threshold < -tol

    if survives:
        logger.warning("violation survives re-verification: %s (n=%d, %s, margin %.3g)",
                       p, n_eff, flavor.value, report.margin)
    else:
        logger.info("candidate %s did not survive re-verification", p)
    return report, survives


# ---------------------------------------------------------------------------
# Family scans
# ---------------------------------------------------------------------------

def sample_rng(seed: int, index: int) -> np.random.Generator:
    """Generator for sample *index* of a run seeded with *seed*."""
    return np.random.default_rng(np.random.SeedSequence([seed, index]))


def sampling_descriptor(d: int, radius: float) -> str:
    return f"monic centered degree {d}, free coefficients uniform in |a| <= {radius:g}"


def sample_polynomial(d: int, rng: np.random.Generator, radius: float) -> Polynomial:
    """z^d + a_{d−2}z^{d−2} + … + a₀ with each a_k uniform in the disk of *radius*."""
    count = d - 1
    moduli = radius * np.sqrt(rng.random(count))
    angles = 2 * math.pi * rng.random(count)
    free = moduli * np.exp(1j * angles)
    return Polynomial(tuple(free) + (0j, 1 + 0j))


def scan_family(
    d: int,
    n: int,
    flavor: Flavor | str,
    samples: int,
    seed: int,
    cfg: RootFindConfig | None = None,
    radius: float | None = None,
    workers: int | None = None,
) -> ScanSummary:
    """
    Check *samples* random monic centered polynomials of degree *d*.

    Sample i draws from ``sample_rng(seed, i)``; results are reduced
    in index order, so the summary does not depend on *workers*.
    """
    flavor = Flavor(flavor)
    if d < 2:
        raise DegreeTooLow("degree must be at least 2")
    if samples < 0:
        raise ValueError(f"samples must be non-negative, got {samples}")
    if seed < 0:
        raise ValueError(f"seed must be non-negative, got {seed}")
    if flavor is Flavor.THEOREM3 and n != 2:
        logger.info("theorem3 scan uses n = 2 (requested n = %d)", n)
        n = 2
    if flavor is not Flavor.THEOREM3 and n < 2:
        raise ValueError(f"conjectures are stated for n >= 2, got {n}")
    if d ** n > config.MAX_DEGREE:
        raise DegreeOverflow(f"iterated degree {d}**{n} exceeds max_degree {config.MAX_DEGREE}")
    radius = config.SCAN_RADIUS if radius is None else radius
    workers = workers or config.worker_count()

    def run_one(index: int) -> tuple[Polynomial, BoundReport | None]:
        p = sample_polynomial(d, sample_rng(seed, index), radius)
        try:
            return p, check_bound(p, n, flavor, cfg)
        except NoConvergence as exc:
            logger.warning("sample %d skipped: %s", index, exc)
            return p, None

    with ThreadPoolExecutor(max_workers=workers) as executor:
        results = list(executor.map(run_one, range(samples)))

    min_observed = math.inf
    argmin = None
    skipped = 0
    candidates = []
    for p, report in results:
        if report is None:
            skipped += 1
            continue
        if report.observed_max < min_observed:
            min_observed, argmin = report.observed_max, p
        if not report.passed:
            candidates.append(p)

    violations = []
    for p in candidates:
        try:
            tight, survives = reverify(p, n, flavor, cfg)
        except NoConvergence as exc:
            logger.warning("candidate %s skipped: re-verification failed: %s", p, exc)
            skipped += 1
            continue
        if survives:
            violations.append((p, tight))

    threshold = threshold_for(flavor, d, n)
    logger.info("scan d=%d n=%d %s: %d samples, %d skipped, min M_n %.9g, %d violations",
                d, n, flavor.value, samples, skipped, min_observed, len(violations))
    return ScanSummary(
        d=d,
        n=n,
        flavor=flavor,
        sampling=sampling_descriptor(d, radius),
        seed=seed,
        sample_count=samples,
        skipped=skipped,
        min_observed_max=min_observed,
        min_margin=min_observed - threshold,
        argmin=argmin,
        violations=tuple(violations),
    )


def strictness_probe(
    p: Polynomial,
    n_max: int,
    cfg: RootFindConfig | None = None,
    strictness_tol: float | None = None,
) -> list[tuple[int, float, float, bool]]:
    """For n = 2 … n_max: (n, M_n(p), dⁿ, M_n(p) > dⁿ + tol)."""
    if p.degree < 2:
        raise DegreeTooLow("degree must be at least 2")
    tol = config.STRICTNESS_TOL if strictness_tol is None else strictness_tol
    entries = []
    for n in range(2, n_max + 1):
        observed = dominant_point(fixed_points(p, n, cfg)).abs_multiplier
        floor = float(p.degree ** n)
        entries.append((n, observed, floor, observed > floor + tol))
    return entries
