"""
Unit tests for poly/polynomial.py
"""

import cmath
import unittest

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from errors import DegreeOverflow, DegreeTooLow, PolynomialParseError
from poly.polynomial import (
    AffineMap,
    Polynomial,
    affine_conjugate,
    compose,
    derivative,
    evaluate,
    evaluate_with_derivative,
    format_complex,
    format_polynomial,
    iterate,
    normalize,
    orbit,
    orbit_is_finite,
    parse_complex,
    parse_polynomial,
)


def _close(a, b, tol=1e-12):
    return abs(complex(a) - complex(b)) <= tol * max(1.0, abs(complex(b)))


def _coeffs_close(p, q, tol):
    if p.degree != q.degree:
        return False
    scale = max(abs(c) for c in q.coeffs)
    return all(abs(a - b) <= tol * scale for a, b in zip(p.coeffs, q.coeffs))


unit_disk = st.builds(
    lambda r, t: r * cmath.exp(1j * t),
    st.floats(0.0, 1.0),
    st.floats(0.0, 2 * np.pi),
)
small_polys = st.lists(unit_disk, min_size=2, max_size=6).map(
    lambda cs: Polynomial(tuple(cs[:-1]) + (0.5 + abs(cs[-1]),))
)


class TestPolynomialType(unittest.TestCase):
    """Tests for the Polynomial value type."""

    def test_trailing_zeros_are_stripped(self):
        p = Polynomial((1, 2, 0, 0))
        self.assertEqual(p.degree, 1)
        self.assertEqual(p.coeffs, (1 + 0j, 2 + 0j))

    def test_tiny_leading_coefficient_is_stripped(self):
        self.assertEqual(Polynomial((1, 1, 1e-301)).degree, 1)

    def test_zero_polynomial_keeps_one_coefficient(self):
        self.assertEqual(Polynomial((0, 0)).coeffs, (0j,))

    def test_from_roots(self):
        p = Polynomial.from_roots([1, -1])
        self.assertEqual(p.coeffs, (-1 + 0j, 0j, 1 + 0j))

    def test_arithmetic_with_scalars(self):
        p = Polynomial((0, 0, 1)) - 1
        self.assertEqual(p.coeffs, (-1 + 0j, 0j, 1 + 0j))


class TestEvaluate(unittest.TestCase):
    """Tests for evaluate and evaluate_with_derivative."""

    def test_quadratic_plus_one(self):
        self.assertEqual(evaluate(Polynomial((1, 0, 1)), 2), 5)

    def test_identity(self):
        self.assertEqual(evaluate(Polynomial((0, 1)), 3 + 4j), 3 + 4j)

    def test_complex_leading(self):
        self.assertEqual(evaluate(Polynomial((0, 0, 1 + 1j)), 1), 1 + 1j)

    def test_constant_is_exact(self):
        self.assertEqual(evaluate(Polynomial((7,)), 123.0), 7)

    def test_array_input(self):
        values = evaluate(Polynomial((1, 0, 1)), np.array([0, 1, 2], dtype=complex))
        np.testing.assert_allclose(values, [1, 2, 5])

    def test_overflow_is_non_finite(self):
        value = evaluate(Polynomial.monomial(200), 1e10 + 0j)
        self.assertFalse(cmath.isfinite(value))

    def test_value_and_slope(self):
        value, slope = evaluate_with_derivative(Polynomial((1, 0, 1)), 3)
        self.assertEqual((value, slope), (10, 6))


class TestDerivative(unittest.TestCase):
    """Tests for derivative."""

    def test_power_rule(self):
        self.assertEqual(derivative(Polynomial((0.3, 0, 1))).coeffs, (0j, 2 + 0j))

    def test_constant(self):
        self.assertEqual(derivative(Polynomial((5,))).coeffs, (0j,))

    def test_complex_scale(self):
        self.assertEqual(derivative(Polynomial((0, 0, 2j))).coeffs, (0j, 4j))


class TestCompose(unittest.TestCase):
    """Tests for compose and iterate."""

    def test_monomials(self):
        sq = Polynomial.monomial(2)
        self.assertEqual(compose(sq, sq).coeffs, Polynomial.monomial(4).coeffs)

    def test_binomial_expansion(self):
        p = Polynomial((1, 0, 1))
        self.assertEqual(compose(p, p).coeffs, (2, 0, 2, 0, 1))

    def test_scaled_square(self):
        a = 1.5 - 0.5j
        p = Polynomial((0, 0, a))
        self.assertTrue(_coeffs_close(compose(p, p), Polynomial.monomial(4, a ** 3), 1e-15))

    def test_overflow(self):
        p = Polynomial.monomial(64)
        with self.assertRaises(DegreeOverflow):
            compose(p, p, max_degree=4095)

    def test_iterate_base_case(self):
        p = Polynomial((0.1, 2, 3))
        self.assertEqual(iterate(p, 1), p)

    def test_iterate_square_minus_one(self):
        self.assertEqual(iterate(Polynomial((-1, 0, 1)), 2).coeffs, (0, 0, -2, 0, 1))

    def test_iterate_overflow(self):
        with self.assertRaises(DegreeOverflow):
            iterate(Polynomial.monomial(2), 13)

    def test_iterate_rejects_zero(self):
        with self.assertRaises(ValueError):
            iterate(Polynomial.monomial(2), 0)

    @settings(max_examples=30, deadline=None)
    @given(small_polys, small_polys, st.lists(unit_disk, min_size=5, max_size=5))
    def test_horner_of_composition(self, p, q, points):
        pq = compose(p, q)
        for z in points:
            self.assertTrue(_close(evaluate(pq, z), evaluate(p, evaluate(q, z)), 1e-9))

    @settings(max_examples=20, deadline=None)
    @given(small_polys.filter(lambda p: p.degree <= 3), st.integers(1, 2), st.integers(1, 2))
    def test_iterate_adds_indices(self, p, m, n):
        lhs = iterate(p, m + n)
        rhs = compose(iterate(p, m), iterate(p, n))
        self.assertTrue(_coeffs_close(lhs, rhs, 1e-9))


class TestOrbit(unittest.TestCase):
    """Tests for orbit."""

    def test_two_cycle(self):
        self.assertEqual(orbit(Polynomial((-1, 0, 1)), 0, 2), [0, -1, 0])

    def test_fixed_point(self):
        self.assertEqual(orbit(Polynomial.monomial(2), 1, 3), [1, 1, 1, 1])

    def test_escape(self):
        self.assertEqual(orbit(Polynomial((1, 0, 1)), 0, 3), [0, 1, 2, 5])

    def test_overflow_flagged(self):
        points = orbit(Polynomial.monomial(2), 10, 12)
        self.assertFalse(orbit_is_finite(points))


class TestAffineConjugate(unittest.TestCase):
    """Tests for AffineMap, affine_conjugate and normalize."""

    def test_identity_map(self):
        p = Polynomial.monomial(2)
        self.assertEqual(affine_conjugate(p, AffineMap.identity()), p)

    def test_scaling(self):
        result = affine_conjugate(Polynomial.monomial(2), AffineMap(2))
        self.assertTrue(_coeffs_close(result, Polynomial((0, 0, 2)), 1e-15))

    def test_centering(self):
        # z² + z conjugated by z − ½ becomes z² + ¼
        result = affine_conjugate(Polynomial((0, 1, 1)), AffineMap(1, -0.5))
        self.assertTrue(_coeffs_close(result, Polynomial((0.25, 0, 1)), 1e-15))

    def test_zero_scale_rejected(self):
        with self.assertRaises(ValueError):
            AffineMap(0)

    def test_inverse_round_trip(self):
        L = AffineMap(1.3 - 0.2j, 0.7j)
        for z in (0, 1 + 1j, -3.5):
            self.assertTrue(_close(L.inverse()(L(z)), z, 1e-14))

    @settings(max_examples=30, deadline=None)
    @given(small_polys, unit_disk.filter(lambda a: abs(a) > 0.2), unit_disk)
    def test_conjugate_back(self, p, alpha, beta):
        L = AffineMap(alpha, beta)
        back = affine_conjugate(affine_conjugate(p, L), L.inverse())
        self.assertTrue(_coeffs_close(back, p, 1e-10))

    def test_normalize_monic_centered(self):
        p = Polynomial((1 + 1j, 2, -0.5, 3j))
        monic, L = normalize(p)
        self.assertEqual(monic.leading, 1)
        self.assertEqual(monic.coeffs[-2], 0)
        expected = affine_conjugate(p, L)
        self.assertTrue(_coeffs_close(monic, expected, 1e-12))

    def test_normalize_rejects_linear(self):
        with self.assertRaises(DegreeTooLow):
            normalize(Polynomial((0, 1)))


class TestTextForm(unittest.TestCase):
    """Tests for the comma-separated text form."""

    def test_parse_forms(self):
        self.assertEqual(parse_complex("2"), 2)
        self.assertEqual(parse_complex("1+2i"), 1 + 2j)
        self.assertEqual(parse_complex("1-2i"), 1 - 2j)
        self.assertEqual(parse_complex("3i"), 3j)
        self.assertEqual(parse_complex("-i"), -1j)
        self.assertEqual(parse_complex("1e-3-2.5e+2i"), complex(1e-3, -250))

    def test_parse_polynomial(self):
        self.assertEqual(parse_polynomial("-1,0,1").coeffs, (-1, 0, 1))

    def test_bad_text(self):
        for text in ("", "1,,2", "abc", "1+2j"):
            with self.assertRaises(PolynomialParseError):
                parse_polynomial(text)

    def test_non_finite_rejected(self):
        for text in ("nan,0,1", "0,inf,1", "1e400,0,1", "0,0,1+nani", "-infi,0,1"):
            with self.assertRaises(PolynomialParseError, msg=text):
                parse_polynomial(text)

    @settings(max_examples=100)
    @given(st.complex_numbers(allow_nan=False, allow_infinity=False))
    def test_complex_round_trip_is_bit_exact(self, z):
        back = parse_complex(format_complex(z))
        self.assertEqual(back.real.hex(), z.real.hex())
        self.assertEqual(back.imag.hex(), z.imag.hex())

    def test_polynomial_round_trip(self):
        p = Polynomial((0.1, -2.5 + 1e-17j, 0, 3j))
        self.assertEqual(parse_polynomial(format_polynomial(p)), p)


if __name__ == "__main__":
    unittest.main()
