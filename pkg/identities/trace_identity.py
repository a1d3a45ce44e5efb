"""
Trace Identity — iterfix

Numerical checks of the multiplier trace identity

    Σ_{pⁿ(z)=z} (pⁿ)′(z) = dⁿ(dⁿ − 1) + cⁿ,   c = Σ_{p(z)=w} p′(z),

and of the algebraic steps that turn it into the bound M₂(p) ≥ 4.

Design:
  1. c is estimated from several w and the estimates must agree
  2. sums run over root clusters, one multiplier per cluster times multiplicity
  3. a failed proved identity raises; it is a solver problem, not mathematics
"""

from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

import config
from dynamics.periodic_points import fixed_points, multiplier
from errors import CInconsistent, DegreeTooLow, IdentityMismatch
from poly.polynomial import IDENTITY_POLY, Polynomial, compose, derivative, evaluate
from rootfind.aberth import RootFindConfig, find_roots

logger = logging.getLogger(__name__)

# p′(ξ₁) + p′(ξ₂) = 2 for every quadratic
_FIXED_DERIV_SUM_TOL: float = 1e-8
_CYCLE_SUM_TOL: float = 1e-6


@dataclass(frozen=True)
class TraceReport:
    n: int
    d: int
    c: complex
    lhs: complex
    rhs: complex
    abs_residual: float
    rel_residual: float
    w_samples: tuple[complex, ...] = ()
    c_samples: tuple[complex, ...] = ()


class CycleSumCheck(NamedTuple):
    a: complex
    fixed_deriv_sum: complex
    cycle_sum: complex
    predicted: complex


def _require_degree(p: Polynomial) -> None:
    if p.degree < 2:
        raise DegreeTooLow("degree must be at least 2")


def preimage_sum(p: Polynomial, w: complex, cfg: RootFindConfig | None = None) -> complex:
    """Return c = Σ p′(z) over the roots of p(z) = w, counted with multiplicity."""
    _require_degree(p)
    roots = find_roots(p - w, cfg)
    dp = derivative(p)
    return complex(sum(m * evaluate(dp, z) for z, m in roots.roots))


def trace_sum(p: Polynomial, n: int, cfg: RootFindConfig | None = None) -> complex:
    """Σ over the fixed points of pⁿ of multiplicity × multiplier."""
    report = fixed_points(p, n, cfg)
    return complex(sum(pt.multiplicity * pt.multiplier for pt in report.points))


def check_trace_identity(
    p: Polynomial,
    n: int,
    w_samples: Sequence[complex] | None = None,
    cfg: RootFindConfig | None = None,
    c_agreement_tol: float | None = None,
) -> TraceReport:
    """
    Evaluate both sides of the trace identity for pⁿ.

    Raises:
        CInconsistent: if two w-samples give estimates of c farther apart than
            *c_agreement_tol* (default ``config.C_AGREEMENT_TOL``).
    """
    _require_degree(p)
    w_samples = tuple(complex(w) for w in (w_samples or config.DEFAULT_W_SAMPLES))
    tol = config.C_AGREEMENT_TOL if c_agreement_tol is None else c_agreement_tol

    c_samples = tuple(preimage_sum(p, w, cfg) for w in w_samples)
    spread = max((abs(a - b) for a, b in itertools.combinations(c_samples, 2)), default=0.0)
    if spread >= tol:
        raise CInconsistent(
            f"c estimates {c_samples} disagree by {spread:.3g} (tolerance {tol:.3g})"
        )
    c = complex(np.mean(c_samples))

    d = p.degree
    dn = d ** n
    lhs = trace_sum(p, n, cfg)
    rhs = complex(dn * (dn - 1)) + c ** n
    abs_residual = abs(lhs - rhs)
    rel_residual = abs_residual / max(1.0, abs(rhs))
    logger.debug("trace d=%d n=%d: lhs=%s rhs=%s rel=%.3g", d, n, lhs, rhs, rel_residual)
    return TraceReport(
        n=n,
        d=d,
        c=c,
        lhs=lhs,
        rhs=rhs,
        abs_residual=abs_residual,
        rel_residual=rel_residual,
        w_samples=w_samples,
        c_samples=c_samples,
    )


def re_c2_identity(d: int, r: float, t: float) -> tuple[float, float]:
    """
    Both sides of Re(c²) = ½d²(d−1)² − r² + 2(½d(d−1) − r cos t)² for
    c = −d(d−1) + r·e^{it}.
    """
    if d < 2:
        raise ValueError(f"d must be at least 2, got {d}")
    if r < 0:
        raise ValueError(f"r must be non-negative, got {r}")
    half = 0.5 * d * (d - 1)
    c = complex(-d * (d - 1), 0.0) + r * complex(math.cos(t), math.sin(t))
    lhs = (c * c).real
    rhs = 0.5 * (d * (d - 1)) ** 2 - r * r + 2.0 * (half - r * math.cos(t)) ** 2
    return lhs, rhs


def period_two_factor(p: Polynomial) -> Polynomial:
    """
    Return (p(p(z)) − z) / (p(z) − z).

    Its roots are the points of exact period two, each counted with its
    multiplicity even when it coincides with a fixed point.
    """
    _require_degree(p)
    numerator = compose(p, p) - IDENTITY_POLY
    denominator = p - IDENTITY_POLY
    quotient, _ = np.polynomial.polynomial.polydiv(numerator.as_array(), denominator.as_array())
    return Polynomial(tuple(quotient))


def quadratic_cycle_sum_check(p: Polynomial, cfg: RootFindConfig | None = None) -> CycleSumCheck:
    """
    For quadratic p with fixed points ξ₁, ξ₂ write p′(ξ₁,₂) = 1 ± a; the two
    remaining fixed points ξ₃, ξ₄ of p² then satisfy
    (p²)′(ξ₃) + (p²)′(ξ₄) = 2(5 − a²).

    Raises:
        IdentityMismatch: if p′(ξ₁) + p′(ξ₂) ≠ 2 or the cycle sum misses the
            prediction beyond tolerance.
    """
    if p.degree != 2:
        raise ValueError(f"quadratic_cycle_sum_check needs degree 2, got {p.degree}")
    dp = derivative(p)
    fixed = sorted(find_roots(p - IDENTITY_POLY, cfg).expanded(), key=lambda z: (z.real, z.imag))
    derivs = [complex(evaluate(dp, z)) for z in fixed]
    fixed_deriv_sum = sum(derivs)
    if abs(fixed_deriv_sum - 2) >= _FIXED_DERIV_SUM_TOL:
        raise IdentityMismatch(f"fixed-point derivatives sum to {fixed_deriv_sum}, not 2")
    a = derivs[0] - 1

    cycle = find_roots(period_two_factor(p), cfg).expanded()
    cycle_sum = complex(sum(multiplier(p, 2, z) for z in cycle))
    predicted = 2 * (5 - a * a)
    if abs(cycle_sum - predicted) >= _CYCLE_SUM_TOL * max(1.0, abs(predicted)):
        raise IdentityMismatch(f"period-two multipliers sum to {cycle_sum}, predicted {predicted}")
    return CycleSumCheck(a=a, fixed_deriv_sum=fixed_deriv_sum, cycle_sum=cycle_sum, predicted=predicted)


def trace_lower_bound(p: Polynomial, n: int, cfg: RootFindConfig | None = None) -> float:
    """
    |dⁿ(dⁿ − 1) + cⁿ| / dⁿ, a lower bound on M_n(p).

    The dⁿ multipliers of pⁿ sum to the right-hand side of the trace identity,
    so at least one of them is this large.
    """
    _require_degree(p)
    c = preimage_sum(p, 0j, cfg)
    dn = p.degree ** n
    return abs(dn * (dn - 1) + c ** n) / dn
