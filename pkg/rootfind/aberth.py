"""
Simultaneous Root Finding — iterfix

Aberth–Ehrlich iteration for all roots of a complex polynomial, Newton
polishing, and clustering of near-coincident roots into multiplicities.

Evaluation goes through an *evaluator*: an object exposing ``degree``,
``log_leading``, ``evaluate(z)`` and ``local(z, anchor)``.  The default
evaluator works on the balanced coefficient vector; callers that can evaluate
the polynomial more accurately another way (orbits of an iterated map, for
instance) pass their own.

Design:
  1. Initial guesses on the Cauchy-bound circle, rotated by a fixed offset
  2. Jacobi-style Aberth sweeps until every estimate reaches the rounding floor
  3. Newton polish of each estimate, bounded distance
  4. Residual acceptance test; one perturbed restart on failure
  5. Single-linkage clustering with Weierstrass inclusion radii
"""

from __future__ import annotations

import cmath
import logging
import math
from dataclasses import dataclass
from functools import partial
from typing import Callable, Protocol, Sequence

import numpy as np

import config
from errors import DegreeTooLow, DerivativeVanishes, NoConvergence
from poly.polynomial import Polynomial

logger = logging.getLogger(__name__)

_EPS: float = float(np.finfo(float).eps)
_TINY_DERIVATIVE: float = 1e-300
_BLOCK: int = 512   # rows per block for the O(N²) pairwise sums


@dataclass(frozen=True)
class RootFindConfig:
    """Tolerances of :func:`find_roots`; defaults come from config.py."""

    max_iterations: int = config.MAX_ITERATIONS
    residual_tol: float = config.RESIDUAL_TOL
    cluster_radius: float = config.CLUSTER_RADIUS
    newton_polish_steps: int = config.NEWTON_POLISH_STEPS
    restart_perturbation: float = config.RESTART_PERTURBATION

    def __post_init__(self) -> None:
        values = (
            self.max_iterations,
            self.residual_tol,
            self.cluster_radius,
            self.newton_polish_steps,
            self.restart_perturbation,
        )
        if any(v <= 0 for v in values):
            raise ValueError(f"RootFindConfig values must be positive: {self}")
        if self.cluster_radius <= self.residual_tol:
            raise ValueError("cluster_radius must exceed residual_tol")


@dataclass(frozen=True)
class RootSet:
    """Roots with multiplicities; ``raw`` keeps the unclustered estimates."""

    roots: tuple[tuple[complex, int], ...]
    converged: bool
    iterations_used: int
    raw: tuple[complex, ...] = ()

    @property
    def total_multiplicity(self) -> int:
        return sum(m for _, m in self.roots)

    def expanded(self) -> list[complex]:
        """Every root repeated according to its multiplicity."""
        return [z for z, m in self.roots for _ in range(m)]


class RootEvaluator(Protocol):
    degree: int
    log_leading: float

    def evaluate(self, z: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Return (q′/q, log|q|, log of the rounding-error scale) at each z."""

    def local(self, z: complex, anchor: complex) -> tuple[complex, complex]:
        """Return (q(z), q′(z)), both divided by a factor fixed by *anchor*."""


# ---------------------------------------------------------------------------
# Coefficient evaluator
# ---------------------------------------------------------------------------

class CoefficientEvaluator:
    """
    Evaluate a polynomial from its balanced coefficients.

    Points with |z| ≤ 1 use Horner's rule directly; points outside the unit
    disk use the reversed polynomial in 1/z so nothing overflows.
    """

    def __init__(self, coeffs: Sequence[complex]) -> None:
        a = np.asarray(coeffs, dtype=complex)
        self.coeffs = a / np.max(np.abs(a))
        self.abs_coeffs = np.abs(self.coeffs)
        self.degree = len(a) - 1
        self.log_leading = math.log(abs(self.coeffs[-1]))

    def evaluate(self, z: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        z = np.asarray(z, dtype=complex)
        inv = np.zeros(z.shape, dtype=complex)
        log_f = np.zeros(z.shape)
        log_s = np.zeros(z.shape)
        inside = np.abs(z) <= 1.0
        if inside.any():
            inv[inside], log_f[inside], log_s[inside] = self._forward(z[inside])
        outside = ~inside
        if outside.any():
            inv[outside], log_f[outside], log_s[outside] = self._reversed(z[outside])
        return inv, log_f, log_s

    def _forward(self, z: np.ndarray):
        a, abs_a = self.coeffs, self.abs_coeffs
        r = np.abs(z)
        value = np.full(z.shape, a[-1], dtype=complex)
        slope = np.zeros(z.shape, dtype=complex)
        bound = np.full(z.shape, abs_a[-1])
        for k in range(self.degree - 1, -1, -1):
            slope = slope * z + value
            value = value * z + a[k]
            bound = bound * r + abs_a[k]
        with np.errstate(divide="ignore", invalid="ignore"):
            return slope / value, np.log(np.abs(value)), np.log(bound)

    def _reversed(self, z: np.ndarray):
        # q(z) = z^N · r(1/z) with r(y) = Σ a_k y^(N−k)
        a, abs_a = self.coeffs, self.abs_coeffs
        n = self.degree
        y = 1.0 / z
        ry = np.abs(y)
        value = np.full(z.shape, a[0], dtype=complex)
        slope = np.zeros(z.shape, dtype=complex)
        bound = np.full(z.shape, abs_a[0])
        for k in range(1, n + 1):
            slope = slope * y + value
            value = value * y + a[k]
            bound = bound * ry + abs_a[k]
        log_z = n * np.log(np.abs(z))
        with np.errstate(divide="ignore", invalid="ignore"):
            inv = (n * value - y * slope) / (z * value)
            return inv, log_z + np.log(np.abs(value)), log_z + np.log(bound)

    def local(self, z: complex, anchor: complex) -> tuple[complex, complex]:
        a = self.coeffs
        n = self.degree
        if abs(anchor) <= 1.0:
            value, slope = complex(a[-1]), 0j
            for k in range(n - 1, -1, -1):
                slope = slope * z + value
                value = value * z + a[k]
            return value, slope
        y = 1 / z
        value, slope = complex(a[0]), 0j
        for k in range(1, n + 1):
            slope = slope * y + value
            value = value * y + a[k]
        factor = (z / anchor) ** n
        return factor * value, factor * (n * value - y * slope) / z


# ---------------------------------------------------------------------------
# Bounds
# ---------------------------------------------------------------------------

def cauchy_radius(coeffs: Sequence[complex]) -> float:
    """
    Return Cauchy's bound on the moduli of the roots.

    This is the positive root r of |a_N| r^N = Σ_{k<N} |a_k| r^k, found by
    bisection on log r; it never exceeds 1 + max|a_k / a_N|.
    """
    mags = np.abs(np.asarray(coeffs, dtype=complex))
    n = len(mags) - 1
    if n < 1:
        raise DegreeTooLow("Cauchy bound requires degree >= 1")
    lower = mags[:-1]
    powers = np.flatnonzero(lower)
    if powers.size == 0:
        return 1.0
    log_lead = math.log(mags[-1])
    log_terms = np.log(lower[powers])

    def excess(t: float) -> float:
        return log_lead + n * t - float(np.logaddexp.reduce(log_terms + powers * t))

    hi = math.log1p(float(np.max(lower)) / mags[-1])
    step = 1.0
    lo = hi - step
    while excess(lo) > 0 and lo > -700:
        step *= 2
        lo = hi - step
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        if excess(mid) >= 0:
            hi = mid
        else:
            lo = mid
    return math.exp(hi)


# ---------------------------------------------------------------------------
# Pairwise helpers
# ---------------------------------------------------------------------------

def _reciprocal_sums(z: np.ndarray, rows: np.ndarray) -> np.ndarray:
    """Σ_{j≠i} 1/(z_i − z_j) for each i in *rows*; coincident points contribute 0."""
    out = np.empty(len(rows), dtype=complex)
    for start in range(0, len(rows), _BLOCK):
        block = rows[start:start + _BLOCK]
        diff = z[block, None] - z[None, :]
        local = np.arange(len(block))
        diff[local, block] = 1.0
        with np.errstate(divide="ignore", invalid="ignore"):
            recip = 1.0 / diff
        recip[local, block] = 0.0
        recip[~np.isfinite(recip)] = 0.0
        out[start:start + len(block)] = recip.sum(axis=1)
    return out


def _log_distance_sums(z: np.ndarray) -> np.ndarray:
    """Σ_{j≠i} log|z_i − z_j|, skipping coincident points."""
    out = np.empty(len(z))
    for start in range(0, len(z), _BLOCK):
        block = np.arange(start, min(start + _BLOCK, len(z)))
        dist = np.abs(z[block, None] - z[None, :])
        dist[np.arange(len(block)), block] = 1.0
        dist[dist == 0] = 1.0
        out[block] = np.log(dist).sum(axis=1)
    return out


# ---------------------------------------------------------------------------
# Aberth iteration
# ---------------------------------------------------------------------------

def _aberth(evaluator: RootEvaluator, radius: float, cfg: RootFindConfig) -> tuple[np.ndarray, int]:
    n = evaluator.degree
    angles = 2 * np.pi * np.arange(n) / n + config.INITIAL_ANGLE_OFFSET
    z = radius * np.exp(1j * angles)
    active = np.ones(n, dtype=bool)
    floor = 4.0 * (n + 1) * _EPS
    iterations = 0
    while active.any() and iterations < cfg.max_iterations:
        iterations += 1
        rows = np.flatnonzero(active)
        inv, log_f, log_s = evaluator.evaluate(z[rows])
        sums = _reciprocal_sums(z, rows)
        with np.errstate(all="ignore"):
            backward = np.exp(log_f - log_s)
            step = 1.0 / (inv - sums)
        exact = np.isneginf(log_f)
        done = exact | (backward <= floor)
        step[done | ~np.isfinite(step)] = 0.0
        stalled = np.abs(step) <= _EPS * np.abs(z[rows])
        z[rows] = z[rows] - step
        active[rows[done | stalled]] = False
    return z, iterations


def _accepted(log_f: np.ndarray, log_s: np.ndarray, tol: float, degree: int) -> np.ndarray:
    """|q(z)| ≤ tol · max(1, s(z)) with tol never below the rounding floor."""
    tol_eff = max(tol, 8.0 * (degree + 1) * _EPS)
    with np.errstate(invalid="ignore"):
        return log_f <= math.log(tol_eff) + np.maximum(log_s, 0.0)


def _inclusion_radii(evaluator: RootEvaluator, z: np.ndarray,
                     log_f: np.ndarray, log_s: np.ndarray) -> np.ndarray:
    """N·|q(z_i)| / |a_N ∏_{j≠i}(z_i − z_j)| with |q| inflated by its rounding bound."""
    n = evaluator.degree
    if n == 1:
        return np.zeros(1)
    noise = np.logaddexp(log_f, math.log(4.0 * (n + 1) * _EPS) + log_s)
    log_r = math.log(n) + noise - evaluator.log_leading - _log_distance_sums(z)
    with np.errstate(over="ignore", invalid="ignore"):
        radii = np.exp(np.minimum(log_r, 700.0))
    radii[~np.isfinite(radii)] = 0.0
    return radii


# ---------------------------------------------------------------------------
# Public operations
# ---------------------------------------------------------------------------

def newton_polish(
    f_eval: Callable[[complex], tuple[complex, complex]],
    z0: complex,
    steps: int,
    max_distance: float | None = None,
) -> complex:
    """
    Apply at most *steps* Newton updates from *z0* and return the iterate with
    the smallest |f|.

    An update that would land farther than *max_distance* from *z0* ends the
    loop (None means unbounded).

    Raises:
        DerivativeVanishes: if |f′| < 1e-300 at an iterate.
    """
    z = complex(z0)
    f, df = f_eval(z)
    best_z, best_f = z, abs(f)
    if not math.isfinite(best_f):
        return z
    for _ in range(steps):
        if f == 0:
            break
        if abs(df) < _TINY_DERIVATIVE:
            raise DerivativeVanishes(f"|f'| below {_TINY_DERIVATIVE} at {z}")
        candidate = z - f / df
        if max_distance is not None and abs(candidate - z0) > max_distance:
            break
        f, df = f_eval(candidate)
        if not cmath.isfinite(f):
            break
        z = candidate
        if abs(f) < best_f:
            best_z, best_f = z, abs(f)
    return best_z


def cluster_roots(
    raw: Sequence[complex],
    radius: float,
    inclusion: Sequence[float] | None = None,
) -> list[tuple[complex, int]]:
    """
    Single-linkage clustering of root estimates.

    Two estimates are linked when their distance is at most *radius* (or the
    sum of their *inclusion* radii, when given and larger).  Each cluster is
    reported as (centroid, size), in order of first appearance.
    """
    if radius <= 0:
        raise ValueError("cluster radius must be positive")
    points = np.asarray(raw, dtype=complex)
    count = len(points)
    if count == 0:
        return []
    inc = np.zeros(count) if inclusion is None else np.asarray(inclusion, dtype=float)
    reach = max(radius, 2.0 * float(inc.max()))
    parent = list(range(count))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    order = np.argsort(points.real, kind="stable")
    for pos, i in enumerate(order):
        for j in order[pos + 1:]:
            if points[j].real - points[i].real > reach:
                break
            if abs(points[i] - points[j]) <= max(radius, inc[i] + inc[j]):
                ri, rj = find(int(i)), find(int(j))
                if ri != rj:
                    parent[max(ri, rj)] = min(ri, rj)

    groups: dict[int, list[int]] = {}
    for i in range(count):
        groups.setdefault(find(i), []).append(i)
    return [(complex(points[members].mean()), len(members)) for members in groups.values()]


def find_roots(
    q: Polynomial,
    cfg: RootFindConfig | None = None,
    *,
    evaluator: RootEvaluator | None = None,
    radius: float | None = None,
) -> RootSet:
    """
    Return all roots of *q*, clustered into multiplicities.

    Args:
        q:         Polynomial of degree ≥ 1.
        cfg:       Tolerances (default ``RootFindConfig()``).
        evaluator: Alternative evaluation of q; must have q's degree.
        radius:    Initial circle radius; defaults to the Cauchy bound of q.

    Raises:
        DegreeTooLow:  for constant q.
        NoConvergence: if the residual test fails after one perturbed restart.
    """
    cfg = cfg or RootFindConfig()
    if q.degree < 1:
        raise DegreeTooLow("root finding requires degree >= 1")
    evaluator = evaluator or CoefficientEvaluator(q.coeffs)
    if evaluator.degree != q.degree:
        raise ValueError(f"evaluator degree {evaluator.degree} != polynomial degree {q.degree}")

    base = cauchy_radius(q.coeffs) if radius is None else float(radius)
    reach = config.POLISH_REACH * cfg.cluster_radius
    total_iterations = 0
    failed = q.degree
    for attempt, start_radius in enumerate((base, base * (1 + cfg.restart_perturbation))):
        z, used = _aberth(evaluator, start_radius, cfg)
        total_iterations += used
        for i in range(len(z)):
            try:
                z[i] = newton_polish(
                    partial(evaluator.local, anchor=complex(z[i])),
                    complex(z[i]),
                    cfg.newton_polish_steps,
                    max_distance=reach,
                )
            except DerivativeVanishes:
                pass
        _, log_f, log_s = evaluator.evaluate(z)
        ok = _accepted(log_f, log_s, cfg.residual_tol, q.degree)
        if ok.all():
            inclusion = _inclusion_radii(evaluator, z, log_f, log_s)
            clusters = cluster_roots(z, cfg.cluster_radius, inclusion=inclusion)
            clusters.sort(key=lambda item: (item[0].real, item[0].imag))
            logger.debug(
                "degree %d: %d clusters after %d sweeps (attempt %d)",
                q.degree, len(clusters), total_iterations, attempt + 1,
            )
            return RootSet(
                roots=tuple(clusters),
                converged=True,
                iterations_used=total_iterations,
                raw=tuple(complex(v) for v in z),
            )
        failed = int(np.count_nonzero(~ok))
        logger.debug("degree %d: %d roots failed the residual test (attempt %d)",
                     q.degree, failed, attempt + 1)
    raise NoConvergence(
        f"{failed} of {q.degree} roots failed the residual test after a perturbed restart"
    )
