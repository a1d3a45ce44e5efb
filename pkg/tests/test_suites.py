"""
Unit tests for verify/suites.py
"""

import math
import unittest
from unittest.mock import MagicMock, patch

import numpy as np

from errors import NoConvergence
from poly.polynomial import Polynomial
from verify import suites
from verify.suites import (
    CheckResult,
    _run_check,
    divisibility_error,
    multiset_distance,
    parabolic_error,
    random_polynomial,
    run_suite,
)


class TestHelpers(unittest.TestCase):
    """Tests for sampling and matching helpers."""

    def test_random_polynomial_shape(self):
        p = random_polynomial(4, np.random.default_rng(0))
        self.assertEqual(p.degree, 4)
        self.assertTrue(0.5 <= abs(p.leading) <= 2.0)
        self.assertTrue(all(abs(c) <= 1.0 for c in p.coeffs[:-1]))

    def test_multiset_distance(self):
        self.assertEqual(multiset_distance([1, 2j], [2j, 1]), 0)
        self.assertAlmostEqual(multiset_distance([0, 10], [0.5, 10]), 0.5)
        self.assertEqual(multiset_distance([1], [1, 2]), math.inf)

    def test_run_check_counts_failures(self):
        def measure(x):
            if x == 2:
                raise NoConvergence("stuck")
            return x * 1e-9

        result = _run_check("demo", 1e-6, [0, 1, 2, 3], measure, workers=2)
        self.assertEqual(result.failures, 1)
        self.assertFalse(result.passed)
        self.assertAlmostEqual(result.worst, 3e-9)

    def test_divisibility_error_for_square(self):
        self.assertLess(divisibility_error((Polynomial.monomial(2), 1, 2)), 1.0)
        self.assertLess(divisibility_error((Polynomial((-1, 0, 1)), 2, 4)), 1.0)

    def test_parabolic_error(self):
        self.assertLess(parabolic_error((Polynomial((0, 1, 1)), 1)), 1e-6)
        self.assertEqual(parabolic_error((Polynomial((-1, 0, 1)), 1)), 0.0)

    def test_run_check_threshold(self):
        result = _run_check("demo", 0.5, [0.1, 0.7], lambda x: x, workers=1)
        self.assertEqual(result, CheckResult("demo", 2, 0.7, 0.5, False, 0))


class TestSuites(unittest.TestCase):
    """Small-scale runs of the built-in suites."""

    def test_identities(self):
        results = run_suite("identities", seed=1, scale=0.02, workers=2)
        self.assertEqual([r.name for r in results],
                         ["trace_identity", "c_w_independence", "c_zero_for_quadratics",
                          "re_c2_identity", "quadratic_cycle_sum"])
        for result in results:
            self.assertTrue(result.passed, msg=f"{result.name}: {result.worst}")

    def test_bounds(self):
        results = run_suite("bounds", seed=2, scale=0.01, workers=2)
        names = [r.name for r in results]
        self.assertIn("theorem3_scan_d2", names)
        self.assertIn("conjugation_invariance", names)
        for result in results:
            self.assertTrue(result.passed, msg=f"{result.name}: {result.worst}")

    def test_bounds_full_scale_counts(self):
        summary = MagicMock(sample_count=1000, min_margin=0.0, violations=(), skipped=0,
                            min_observed_max=4.0)

        def record(name, threshold, items, measure, workers):
            return CheckResult(name, len(items), 0.0, threshold, True)

        with patch.object(suites, "scan_family", return_value=summary), \
                patch.object(suites, "_run_check", side_effect=record):
            counts = {r.name: r.samples for r in run_suite("bounds", seed=0, workers=1)}
        self.assertEqual(counts["conjugation_invariance"], 100)
        self.assertEqual(counts["trace_lower_bound"], 100)
        self.assertEqual(counts["theorem3_scan_d3"], 1000)

    def test_oracles(self):
        results = run_suite("oracles", seed=3, scale=0.02, workers=2)
        self.assertEqual([r.name for r in results],
                         ["quadratic_multiplier_oracle", "roots_from_roots", "fixed_point_count",
                          "fixed_point_divisibility", "parabolic_consistency",
                          "objective_continuity"])
        self.assertEqual([r.samples for r in results], [10, 2, 2, 2, 4, 2])
        for result in results:
            self.assertTrue(result.passed, msg=f"{result.name}: {result.worst}")

    def test_all_runs_every_suite(self):
        stub = [CheckResult("x", 1, 0.0, 1.0, True)]
        with patch.dict(suites._SUITE_FUNCTIONS,
                        {name: (lambda *a, **k: stub) for name in ("identities", "bounds", "oracles")}):
            self.assertEqual(len(run_suite("all", seed=0)), 3)

    def test_unknown_suite(self):
        with self.assertRaises(ValueError):
            run_suite("everything", seed=0)


if __name__ == "__main__":
    unittest.main()
