"""
Verification Suites — iterfix

Built-in invariant checks behind the ``verify`` command.  Each check runs a
family of seeded samples, records the worst residual against its threshold
and fails when any sample exceeds it or its root finding breaks down.

Suites:
  identities  trace identity, w-independence of c, proof identities
  bounds      proved bound scans, monomial sanity, conjugation invariance
  oracles     quadratic closed forms, roots from known roots, fixed-point
              counts, divisibility, parabolic points, objective continuity
"""

from __future__ import annotations

import cmath
import itertools
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import numpy as np

import config
from bounds.bound_checks import Flavor, quadratic_oracle, scan_family
from dynamics.periodic_points import fixed_points, max_multiplier
from errors import CInconsistent, IdentityMismatch, NoConvergence
from identities.trace_identity import (
    check_trace_identity,
    preimage_sum,
    quadratic_cycle_sum_check,
    re_c2_identity,
    trace_lower_bound,
)
from poly.polynomial import AffineMap, Polynomial, affine_conjugate
from rootfind.aberth import find_roots
from search.multiplier_search import SearchConfig, objective, start_point

logger = logging.getLogger(__name__)

SUITES: tuple[str, ...] = ("identities", "bounds", "oracles", "all")

_NUMERICAL_FAILURES = (NoConvergence, CInconsistent, IdentityMismatch)


@dataclass(frozen=True)
class CheckResult:
    name: str
    samples: int
    worst: float
    threshold: float
    passed: bool
    failures: int = 0


# ---------------------------------------------------------------------------
# Sampling helpers
# ---------------------------------------------------------------------------

def random_disk(rng: np.random.Generator, radius: float, size: int | None = None):
    moduli = radius * np.sqrt(rng.random(size))
    angles = 2 * math.pi * rng.random(size)
    return moduli * np.exp(1j * angles)


def random_polynomial(d: int, rng: np.random.Generator) -> Polynomial:
    """Coefficients in the unit disk, leading modulus in [0.5, 2]."""
    lower = random_disk(rng, 1.0, d)
    lead = rng.uniform(0.5, 2.0) * cmath.exp(2j * math.pi * rng.random())
    return Polynomial(tuple(lower) + (lead,))


def multiset_distance(a: Sequence[complex], b: Sequence[complex], relative: bool = True) -> float:
    """Smallest worst-case distance over matchings of two equal-size multisets."""
    if len(a) != len(b):
        return math.inf
    best = math.inf
    for perm in itertools.permutations(range(len(b))):
        worst = 0.0
        for x, j in zip(a, perm):
            err = abs(x - b[j])
            if relative:
                err /= max(1.0, abs(b[j]))
            worst = max(worst, err)
            if worst >= best:
                break
        best = min(best, worst)
    return best


def _run_check(
    name: str,
    threshold: float,
    items: Sequence,
    measure: Callable[[object], float],
    workers: int,
) -> CheckResult:
    """Apply *measure* to every item in parallel and reduce in input order."""

    def safe(item) -> float | None:
        try:
            return measure(item)
        except _NUMERICAL_FAILURES as exc:
            logger.warning("%s: sample %s failed: %s", name, item, exc)
            return None

    with ThreadPoolExecutor(max_workers=workers) as executor:
        values = list(executor.map(safe, items))

    failures = sum(v is None for v in values)
    finite = [v for v in values if v is not None]
    worst = max(finite, default=0.0)
    passed = failures == 0 and worst < threshold
    logger.info("%s: %d samples, worst %.3g (threshold %.3g)%s",
                name, len(items), worst, threshold, "" if passed else " FAILED")
    return CheckResult(name, len(items), worst, threshold, passed, failures)


def _count(base: int, scale: float) -> int:
    return max(1, int(round(base * scale)))


# ---------------------------------------------------------------------------
# Suites
# ---------------------------------------------------------------------------

def identities_suite(seed: int, scale: float = 1.0, workers: int | None = None) -> list[CheckResult]:
    workers = workers or config.worker_count()
    rng = np.random.default_rng(seed)
    results = []

    grid = [(d, n) for d in range(2, 7) for n in (1, 2, 3) if d ** n <= 256]
    per_pair = _count(100, scale)
    polys = [(random_polynomial(d, rng), n) for d, n in grid for _ in range(per_pair)]
    results.append(_run_check(
        "trace_identity", config.TRACE_PASS_TOL, polys,
        lambda item: check_trace_identity(*item).rel_residual, workers,
    ))

    def c_spread(item) -> float:
        p, ws = item
        cs = [preimage_sum(p, w) for w in ws]
        return max(abs(a - b) for a, b in itertools.combinations(cs, 2))

    w_items = [(p, tuple(random_disk(rng, 10.0, 3))) for p, _ in polys[::3]]
    results.append(_run_check("c_w_independence", 1e-7, w_items, c_spread, workers))

    quadratics = [random_polynomial(2, rng) for _ in range(_count(200, scale))]
    results.append(_run_check(
        "c_zero_for_quadratics", 1e-9, quadratics,
        lambda p: abs(preimage_sum(p, 0j)), workers,
    ))

    def re_c2_error(item) -> float:
        lhs, rhs = re_c2_identity(*item)
        return abs(lhs - rhs) / max(1.0, abs(lhs))

    triples = [
        (d, r, t)
        for d in range(2, 7)
        for r in np.linspace(0.0, 2 * d, 20, endpoint=False)
        for t in np.linspace(0.0, 2 * math.pi, 20, endpoint=False)
    ]
    results.append(_run_check("re_c2_identity", config.RE_C2_TOL, triples, re_c2_error, workers))

    def cycle_error(p: Polynomial) -> float:
        check = quadratic_cycle_sum_check(p)
        return abs(check.cycle_sum - check.predicted) / max(1.0, abs(check.predicted))

    cycle_polys = [Polynomial((0.25, 0, 1))] + [random_polynomial(2, rng)
                                               for _ in range(_count(300, scale))]
    results.append(_run_check("quadratic_cycle_sum", 1e-6, cycle_polys, cycle_error, workers))
    return results


def bounds_suite(seed: int, scale: float = 1.0, workers: int | None = None) -> list[CheckResult]:
    workers = workers or config.worker_count()
    rng = np.random.default_rng(seed)
    results = []

    for d in (2, 3, 4):
        summary = scan_family(d, 2, Flavor.THEOREM3, _count(1000, scale), seed, workers=workers)
        worst = max(0.0, -summary.min_margin) if summary.sample_count else 0.0
        passed = not summary.violations and summary.skipped == 0
        logger.info("theorem3 scan d=%d: min M_2 %.9g", d, summary.min_observed_max)
        results.append(CheckResult(f"theorem3_scan_d{d}", summary.sample_count, worst,
                                   config.VIOLATION_TOL, passed, summary.skipped))

    monomials = [(d, n) for d in range(2, 7) for n in (1, 2, 3) if d ** n <= 256]
    results.append(_run_check(
        "monomial_equality", 1e-9, monomials,
        lambda item: abs(max_multiplier(Polynomial.monomial(item[0]), item[1])
                         - item[0] ** item[1]) / item[0] ** item[1],
        workers,
    ))

    def lower_bound_excess(item) -> float:
        p, n = item
        return max(0.0, trace_lower_bound(p, n) - max_multiplier(p, n))

    lb_items = [(random_polynomial(int(rng.integers(2, 5)), rng), 2) for _ in range(_count(100, scale))]
    results.append(_run_check("trace_lower_bound", 1e-6, lb_items, lower_bound_excess, workers))

    def conjugation_error(item) -> float:
        p, L = item
        before = fixed_points(p, 2).multipliers_with_multiplicity()
        after = fixed_points(affine_conjugate(p, L), 2).multipliers_with_multiplicity()
        return _greedy_distance(before, after)

    conj_items = []
    for _ in range(_count(100, scale)):
        alpha = rng.uniform(0.5, 2.0) * cmath.exp(2j * math.pi * rng.random())
        conj_items.append((random_polynomial(int(rng.integers(2, 4)), rng),
                           AffineMap(alpha, complex(random_disk(rng, 1.0)))))
    results.append(_run_check("conjugation_invariance", 1e-6, conj_items, conjugation_error, workers))
    return results


def _greedy_distance(a: Sequence[complex], b: Sequence[complex]) -> float:
    """Greedy nearest matching of two multiplier multisets, relative error."""
    if len(a) != len(b):
        return math.inf
    remaining = list(b)
    worst = 0.0
    for x in sorted(a, key=abs, reverse=True):
        j = min(range(len(remaining)), key=lambda k: abs(remaining[k] - x))
        worst = max(worst, abs(remaining.pop(j) - x) / max(1.0, abs(x)))
    return worst


def oracles_suite(seed: int, scale: float = 1.0, workers: int | None = None) -> list[CheckResult]:
    workers = workers or config.worker_count()
    rng = np.random.default_rng(seed)

    def quadratic_error(c: complex) -> float:
        report = fixed_points(Polynomial((c, 0, 1)), 2)
        return multiset_distance(report.multipliers_with_multiplicity(), quadratic_oracle(c))

    cs = [complex(c) for c in random_disk(rng, 2.0, _count(500, scale))]
    results = [_run_check("quadratic_multiplier_oracle", 1e-8, cs, quadratic_error, workers)]

    def roots_error(roots: np.ndarray) -> float:
        found = find_roots(Polynomial.from_roots(roots)).expanded()
        return _greedy_distance(list(roots), found)

    root_sets = [_separated_roots(rng, int(rng.integers(2, 21))) for _ in range(_count(100, scale))]
    results.append(_run_check("roots_from_roots", 1e-8, root_sets, roots_error, workers))

    def count_error(item) -> float:
        p, n = item
        return abs(fixed_points(p, n).total_count_with_multiplicity - p.degree ** n)

    pairs = [(d, n) for d in range(2, 7) for n in (1, 2, 3) if d ** n <= 256]
    count_items = []
    for _ in range(_count(100, scale)):
        d, n = pairs[int(rng.integers(len(pairs)))]
        count_items.append((random_polynomial(d, rng), n))
    results.append(_run_check("fixed_point_count", 0.5, count_items, count_error, workers))

    results.append(_run_check("fixed_point_divisibility", 1.0,
                              [(random_polynomial(int(rng.integers(2, 4)), rng),) + _DIVISOR_PAIRS[k]
                               for k in rng.integers(len(_DIVISOR_PAIRS), size=_count(100, scale))],
                              divisibility_error, workers))

    parabolic_items = []
    for _ in range(_count(100, scale)):
        alpha = rng.uniform(0.5, 2.0) * cmath.exp(2j * math.pi * rng.random())
        L = AffineMap(alpha, complex(random_disk(rng, 1.0)))
        a = rng.uniform(0.5, 1.5) * cmath.exp(2j * math.pi * rng.random())
        base = [Polynomial((0.25, 0, 1)), Polynomial((0, 1, 1)), Polynomial((0, 1, -a, 1))]
        parabolic_items.append((affine_conjugate(base[int(rng.integers(3))], L), int(rng.integers(1, 3))))
        parabolic_items.append((random_polynomial(int(rng.integers(2, 5)), rng), 2))
    results.append(_run_check("parabolic_consistency", config.PARABOLIC_TOL, parabolic_items,
                              parabolic_error, workers))

    def continuity_error(item) -> float:
        search_cfg, params, step = item
        return abs(objective(params + step, search_cfg) - objective(params, search_cfg))

    continuity_items = []
    for index in range(_count(100, scale)):
        search_cfg = SearchConfig(d=int(rng.integers(2, 5)), n=2, seed=seed)
        step = 1e-6 * rng.standard_normal(search_cfg.dimension)
        continuity_items.append((search_cfg, start_point(search_cfg, index), step))
    results.append(_run_check("objective_continuity", 1e-2, continuity_items, continuity_error, workers))
    return results


# (m, n) with m | n and m < n
_DIVISOR_PAIRS: tuple[tuple[int, int], ...] = ((1, 2), (1, 3), (2, 4))


def _separated_roots(rng: np.random.Generator, degree: int, separation: float = 1e-2) -> np.ndarray:
    """Distinct points of the unit disk, pairwise at least *separation* apart."""
    while True:
        roots = random_disk(rng, 1.0, degree)
        gaps = np.abs(roots[:, None] - roots[None, :]) + np.eye(degree) * separation
        if gaps.min() >= separation:
            return roots


def divisibility_error(item) -> float:
    """
    Worst violation, in units of the tolerance, of the rule that every fixed
    point of pᵐ reappears among the fixed points of pⁿ (location within
    1e−7) with multiplier raised to n/m (within 1e−6 relative).
    """
    p, m, n = item
    fine = fixed_points(p, n).points
    worst = 0.0
    for pt in fixed_points(p, m).points:
        match = min(fine, key=lambda q: abs(q.location - pt.location))
        expected = pt.multiplier ** (n // m)
        worst = max(
            worst,
            abs(match.location - pt.location) / 1e-7,
            abs(match.multiplier - expected) / (1e-6 * max(1.0, abs(expected))),
        )
    return worst


def parabolic_error(item) -> float:
    """Largest |λ − 1| over the multiple fixed points of pⁿ; 0 if there are none."""
    p, n = item
    return max((abs(pt.multiplier - 1) for pt in fixed_points(p, n).points if pt.multiplicity >= 2),
               default=0.0)


_SUITE_FUNCTIONS = {
    "identities": identities_suite,
    "bounds": bounds_suite,
    "oracles": oracles_suite,
}


def run_suite(name: str, seed: int, scale: float = 1.0, workers: int | None = None) -> list[CheckResult]:
    """Run one suite, or every suite for ``all``."""
    if name not in SUITES:
        raise ValueError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
    names: Iterable[str] = _SUITE_FUNCTIONS if name == "all" else (name,)
    results: list[CheckResult] = []
    for suite in names:
        results.extend(_SUITE_FUNCTIONS[suite](seed, scale, workers))
    return results
