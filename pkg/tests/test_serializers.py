"""
Unit tests for report/serializers.py
"""

import csv
import io
import json
import math
import unittest

from bounds.bound_checks import check_theorem3, scan_family
from dynamics.periodic_points import fixed_points
from identities.trace_identity import check_trace_identity, quadratic_cycle_sum_check
from poly.polynomial import Polynomial, parse_polynomial
from report.serializers import (
    FORMATS,
    bound_report_to_dict,
    complex_from_dict,
    complex_to_dict,
    csv_rows,
    cycle_sum_to_dict,
    fixed_point_report_to_dict,
    flatten,
    render,
    render_csv,
    scan_summary_to_dict,
    search_result_to_dict,
    trace_report_to_dict,
)
from search.multiplier_search import SearchConfig, minimize


def _read_csv(text):
    return list(csv.DictReader(io.StringIO(text)))


class TestComplex(unittest.TestCase):
    """Tests for the complex-number encoding."""

    def test_dict_form(self):
        self.assertEqual(complex_to_dict(1 - 2j), {"re": 1.0, "im": -2.0})
        self.assertEqual(complex_from_dict({"re": "0.5", "im": 3}), 0.5 + 3j)


class TestFixedPointDocument(unittest.TestCase):
    """Tests for fixed_point_report_to_dict and its renderings."""

    def setUp(self):
        self.doc = fixed_point_report_to_dict(fixed_points(Polynomial((-1, 0, 1)), 2))

    def test_fields(self):
        self.assertEqual(self.doc["count_with_multiplicity"], 4)
        self.assertEqual(len(self.doc["points"]), 4)
        self.assertEqual(set(self.doc["points"][0]),
                         {"location", "multiplier", "abs_multiplier", "multiplicity",
                          "exact_period", "cycle_id", "class"})
        classes = {pt["class"] for pt in self.doc["points"]}
        self.assertEqual(classes, {"attracting", "repelling"})

    def test_json_round_trip(self):
        back = json.loads(render(self.doc, "json"))
        self.assertEqual(back, self.doc)

    def test_csv_columns(self):
        rows = _read_csv(render(self.doc, "csv", table="points"))
        self.assertEqual(len(rows), 4)
        for column in ("location_re", "location_im", "multiplier_re", "multiplier_im", "n", "d"):
            self.assertIn(column, rows[0])
        self.assertNotIn("location", rows[0])
        self.assertEqual(rows[0]["n"], "2")

    def test_text(self):
        text = render(self.doc, "text")
        self.assertIn("count_with_multiplicity: 4", text)
        self.assertTrue(text.endswith("\n"))


class TestOtherDocuments(unittest.TestCase):
    """Tests for the remaining report dictionaries."""

    def test_trace(self):
        doc = trace_report_to_dict(check_trace_identity(Polynomial.monomial(2), 2))
        self.assertEqual(len(doc["c_samples"]), 3)
        self.assertAlmostEqual(complex_from_dict(doc["rhs"]), 12, places=9)
        row = csv_rows(doc)[0]
        self.assertIn("lhs_re", row)
        self.assertIsInstance(row["w_samples"], str)

    def test_cycle_sum(self):
        doc = cycle_sum_to_dict(quadratic_cycle_sum_check(Polynomial.monomial(2)))
        self.assertEqual(set(doc), {"a", "fixed_deriv_sum", "cycle_sum", "predicted"})

    def test_bound_report(self):
        doc = bound_report_to_dict(check_theorem3(Polynomial((-1, 0, 1))))
        self.assertEqual(doc["flavor"], "theorem3")
        self.assertEqual(parse_polynomial(doc["polynomial"]), Polynomial((-1, 0, 1)))
        self.assertTrue(doc["passed"])
        self.assertEqual(flatten(doc)["witness_class"], "repelling")

    def test_empty_scan_is_valid_json(self):
        doc = scan_summary_to_dict(scan_family(2, 2, "theorem3", 0, seed=4))
        text = render(doc, "json")
        self.assertIn("Infinity", text)
        back = json.loads(text)
        self.assertEqual(back["min_observed_max"], math.inf)
        self.assertIsNone(back["argmin"])
        self.assertEqual(back["family"]["flavor"], "theorem3")

    def test_empty_table_keeps_shared_fields(self):
        doc = scan_summary_to_dict(scan_family(2, 2, "theorem3", 2, seed=4))
        rows = csv_rows(doc, "violations")
        self.assertEqual(len(rows), 1)
        self.assertIn("seed", rows[0])

    def test_search_result(self):
        cfg = SearchConfig(d=2, n=2, starts=1, iters_per_start=0, seed=3)
        doc = search_result_to_dict(minimize(cfg, workers=1))
        self.assertEqual(doc["config"]["seed"], 3)
        self.assertIn("sampling", doc["config"])
        self.assertEqual(doc["evaluations"], 1)
        self.assertFalse(doc["below_floor"])
        self.assertIn("config_d", flatten(doc))


class TestRendering(unittest.TestCase):
    """Tests for render and render_csv."""

    def test_header_is_union_of_keys(self):
        text = render_csv([{"a": 1}, {"a": 2, "b": 3}])
        self.assertEqual(text.splitlines(), ["a,b", "1,", "2,3"])

    def test_unknown_format(self):
        with self.assertRaises(ValueError):
            render({}, "xml")

    def test_formats(self):
        self.assertEqual(FORMATS, ("json", "csv", "text"))


if __name__ == "__main__":
    unittest.main()
