"""
Periodic Points — iterfix

Fixed points of the iterate pⁿ: locations, multipliers (pⁿ)′(ξ),
multiplicities, exact periods and cycle membership, plus the max-multiplier
functional M_n(p) = max |(pⁿ)′(ξ)|.

Design:
  - pⁿ is built by composition (degree guard, initial radius), but roots and
    residuals of pⁿ(z) − z are evaluated along orbits of p, never from the
    expanded coefficients
  - multipliers are chain-rule products along the orbit
  - a multiple root must be parabolic; a violation is reported as a warning
"""

from __future__ import annotations

import enum
import logging
import math
from dataclasses import dataclass, replace
from typing import Sequence

import numpy as np

import config
from errors import DegreeTooLow
from poly.polynomial import (
    IDENTITY_POLY,
    Polynomial,
    derivative,
    evaluate,
    evaluate_with_derivative,
    iterate,
    orbit,
    orbit_is_finite,
)
from rootfind.aberth import RootFindConfig, cauchy_radius, find_roots

logger = logging.getLogger(__name__)

# Orbit values beyond this modulus are continued asymptotically (p(z) ≈ a_d z^d).
_OVERFLOW_GUARD: float = 1e250


class FixedPointClass(str, enum.Enum):
    ATTRACTING = "attracting"
    INDIFFERENT = "indifferent"
    REPELLING = "repelling"


@dataclass(frozen=True)
class PeriodicPoint:
    """A fixed point ξ of pⁿ with its multiplier (pⁿ)′(ξ)."""

    location: complex
    multiplier: complex
    multiplicity: int
    exact_period: int
    cycle_id: int

    @property
    def abs_multiplier(self) -> float:
        return abs(self.multiplier)


@dataclass(frozen=True)
class FixedPointReport:
    n: int
    d: int
    points: tuple[PeriodicPoint, ...]
    total_count_with_multiplicity: int
    warnings: tuple[str, ...] = ()

    def multipliers_with_multiplicity(self) -> list[complex]:
        return [pt.multiplier for pt in self.points for _ in range(pt.multiplicity)]


# ---------------------------------------------------------------------------
# Orbit evaluation of pⁿ(z) − z
# ---------------------------------------------------------------------------

class IterateEvaluator:
    """
    Root-finder evaluator for F(z) = pⁿ(z) − z computed along orbits.

    Each call costs n Horner passes on p.  Alongside F and F′ it propagates a
    first-order bound on the rounding error of the orbit, which serves as the
    residual scale.
    """

    def __init__(self, p: Polynomial, n: int) -> None:
        self.p = p
        self.n = n
        self.d = p.degree
        self.degree = self.d ** n
        self.log_leading = math.log(abs(p.leading)) * (self.degree - 1) / (self.d - 1)
        self._coeffs = p.as_array()
        self._abs_coeffs = np.abs(self._coeffs)
        self._limit = (_OVERFLOW_GUARD / max(1.0, float(self._abs_coeffs.sum()))) ** (1.0 / self.d)

    def _horner(self, v: np.ndarray):
        a, abs_a = self._coeffs, self._abs_coeffs
        r = np.abs(v)
        value = np.full(v.shape, a[-1], dtype=complex)
        slope = np.zeros(v.shape, dtype=complex)
        bound = np.full(v.shape, abs_a[-1])
        for k in range(self.d - 1, -1, -1):
            slope = slope * v + value
            value = value * v + a[k]
            bound = bound * r + abs_a[k]
        return value, slope, bound

    def evaluate(self, z: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        z = np.asarray(z, dtype=complex)
        v = z.copy()
        dv = np.ones(z.shape, dtype=complex)
        err = np.zeros(z.shape)
        alive = np.ones(z.shape, dtype=bool)
        ratio = np.zeros(z.shape, dtype=complex)
        log_v = np.zeros(z.shape)
        remaining = np.zeros(z.shape, dtype=int)

        with np.errstate(all="ignore"):
            for k in range(self.n):
                escaped = alive & (np.abs(v) > self._limit)
                if escaped.any():
                    ratio[escaped] = dv[escaped] / v[escaped]
                    log_v[escaped] = np.log(np.abs(v[escaped]))
                    remaining[escaped] = self.n - k
                    alive &= ~escaped
                if not alive.any():
                    break
                value, slope, bound = self._horner(v[alive])
                err[alive] = np.abs(slope) * err[alive] + 2 * self.d * bound
                dv[alive] = dv[alive] * slope
                v[alive] = value

            inv = np.empty(z.shape, dtype=complex)
            log_f = np.empty(z.shape)
            log_s = np.empty(z.shape)

            f = v[alive] - z[alive]
            inv[alive] = (dv[alive] - 1) / f
            log_f[alive] = np.log(np.abs(f))
            log_s[alive] = np.log(err[alive] + np.abs(v[alive]) + np.abs(z[alive]))

            gone = ~alive
            if gone.any():
                # far outside the filled Julia set: z·p′(z)/p(z) → d at every step
                log_lead = math.log(abs(self.p.leading))
                steps = remaining[gone]
                lv = log_v[gone]
                for s in range(int(steps.max())):
                    lv = np.where(steps > s, log_lead + self.d * lv, lv)
                inv[gone] = ratio[gone] * float(self.d) ** steps
                log_f[gone] = lv
                log_s[gone] = lv
        return inv, log_f, log_s

    def local(self, z: complex, anchor: complex = 0j) -> tuple[complex, complex]:
        v, slope = complex(z), 1 + 0j
        for _ in range(self.n):
            value, dvalue = evaluate_with_derivative(self.p, v)
            slope *= dvalue
            v = value
        return v - z, slope - 1


def escape_radius(p: Polynomial) -> float:
    """
    Radius outside which |p(z)| > |z|; no periodic point lies beyond it.

    It is the Cauchy bound of |a_d| r^d − Σ_{k≠1}|a_k| r^k − (|a_1| + 1) r.
    """
    mags = [abs(c) for c in p.coeffs]
    mags[1] += 1.0
    return cauchy_radius(mags)


# ---------------------------------------------------------------------------
# Public operations
# ---------------------------------------------------------------------------

def multiplier(p: Polynomial, n: int, xi: complex) -> complex:
    """Return (pⁿ)′(ξ) = ∏_{k<n} p′(pᵏ(ξ)) by the chain rule along the orbit."""
    dp = derivative(p)
    z = complex(xi)
    product = 1 + 0j
    for _ in range(n):
        product *= evaluate(dp, z)
        z = evaluate(p, z)
    return complex(product)


def classify(pt: PeriodicPoint | complex, tol: float | None = None) -> FixedPointClass:
    """Repelling iff |λ| > 1 + tol, attracting iff |λ| < 1 − tol."""
    tol = config.CLASSIFY_TOL if tol is None else tol
    value = pt.multiplier if isinstance(pt, PeriodicPoint) else complex(pt)
    modulus = abs(value)
    if modulus > 1 + tol:
        return FixedPointClass.REPELLING
    if modulus < 1 - tol:
        return FixedPointClass.ATTRACTING
    return FixedPointClass.INDIFFERENT


def _divisors(n: int) -> list[int]:
    return [m for m in range(1, n + 1) if n % m == 0]


def group_cycles(
    points: Sequence[PeriodicPoint],
    p: Polynomial,
    n: int,
    fixpoint_tol: float | None = None,
) -> list[PeriodicPoint]:
    """
    Fill ``exact_period`` and ``cycle_id``.

    The exact period is the least m | n with |pᵐ(ξ) − ξ| < tol·max(1, |ξ|).
    Orbit images are matched to the nearest unassigned point of the same
    period; points on one orbit share a cycle id.
    """
    tol = config.FIXPOINT_TOL if fixpoint_tol is None else fixpoint_tol
    divisors = _divisors(n)
    orbits = [orbit(p, pt.location, n) for pt in points]
    for pt, orb in zip(points, orbits):
        if not orbit_is_finite(orb):
            logger.warning("orbit of %s overflows; its period defaults to %d", pt.location, n)

    periods = []
    for pt, orb in zip(points, orbits):
        scale = max(1.0, abs(pt.location))
        period = next((m for m in divisors if abs(orb[m] - pt.location) < tol * scale), n)
        periods.append(period)

    cycle_ids = [-1] * len(points)
    next_id = 0
    for i, pt in enumerate(points):
        if cycle_ids[i] >= 0:
            continue
        cycle_ids[i] = next_id
        for k in range(1, periods[i]):
            target = orbits[i][k]
            candidates = [
                j for j in range(len(points))
                if cycle_ids[j] < 0 and periods[j] == periods[i]
            ]
            if not candidates:
                logger.warning("cycle %d: no unassigned point left for image %d of %s",
                               next_id, k, pt.location)
                break
            j = min(candidates, key=lambda c: abs(points[c].location - target))
            if abs(points[j].location - target) < tol * max(1.0, abs(target)):
                cycle_ids[j] = next_id
            else:
                logger.warning("cycle %d: image %s of %s matches no computed point",
                               next_id, target, pt.location)
        next_id += 1

    return [
        replace(pt, exact_period=period, cycle_id=cid)
        for pt, period, cid in zip(points, periods, cycle_ids)
    ]


def fixed_points(
    p: Polynomial,
    n: int,
    cfg: RootFindConfig | None = None,
    *,
    fixpoint_tol: float | None = None,
    parabolic_tol: float | None = None,
) -> FixedPointReport:
    """
    Return every fixed point of pⁿ with multiplier, multiplicity and cycle data.

    Raises:
        DegreeTooLow:   for degree(p) ≤ 1.
        DegreeOverflow: if degree(p)ⁿ exceeds config.MAX_DEGREE.
        NoConvergence:  propagated from the root finder.
    """
    if p.degree < 2:
        raise DegreeTooLow("degree must be at least 2")
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    cfg = cfg or RootFindConfig()
    parabolic_tol = config.PARABOLIC_TOL if parabolic_tol is None else parabolic_tol

    q = iterate(p, n) - IDENTITY_POLY
    radius = min(cauchy_radius(q.coeffs), escape_radius(p))
    root_set = find_roots(q, cfg, evaluator=IterateEvaluator(p, n), radius=radius)

    points = [
        PeriodicPoint(
            location=z,
            multiplier=multiplier(p, n, z),
            multiplicity=m,
            exact_period=n,
            cycle_id=-1,
        )
        for z, m in root_set.roots
    ]
    points = group_cycles(points, p, n, fixpoint_tol)

    warnings = []
    for pt in points:
        if pt.multiplicity >= 2 and abs(pt.multiplier - 1) >= parabolic_tol:
            message = (
                f"cluster at {pt.location:.6g} has multiplicity {pt.multiplicity} "
                f"but multiplier {pt.multiplier:.6g}; distinct roots may have merged"
            )
            logger.warning(message)
            warnings.append(message)

    return FixedPointReport(
        n=n,
        d=p.degree,
        points=tuple(points),
        total_count_with_multiplicity=sum(pt.multiplicity for pt in points),
        warnings=tuple(warnings),
    )


def dominant_point(report: FixedPointReport) -> PeriodicPoint:
    """The point of largest |multiplier| (first one on ties)."""
    best = report.points[0]
    for pt in report.points[1:]:
        if pt.abs_multiplier > best.abs_multiplier:
            best = pt
    return best


def max_multiplier(p: Polynomial, n: int, cfg: RootFindConfig | None = None) -> float:
    """M_n(p): the largest |(pⁿ)′(ξ)| over all fixed points of pⁿ."""
    return dominant_point(fixed_points(p, n, cfg)).abs_multiplier
