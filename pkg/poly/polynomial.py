"""
Polynomial Arithmetic — iterfix

Exact-degree complex polynomials stored constant term first, together with
the operations the fixed-point machinery is built on: Horner evaluation,
differentiation, composition, iteration, orbits and affine conjugation.

Text form: comma-separated coefficients, constant first, each written as
``a``, ``a+bi``, ``a-bi`` or ``bi`` (``-1,0,1`` is z² − 1).
"""

from __future__ import annotations

import cmath
import logging
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

import config
from errors import DegreeOverflow, DegreeTooLow, PolynomialParseError

logger = logging.getLogger(__name__)


def _strip(coeffs: Iterable[complex]) -> tuple[complex, ...]:
    """Convert to complex and drop trailing coefficients at or below the threshold."""
    values = [complex(c) for c in coeffs]
    while len(values) > 1 and abs(values[-1]) <= config.LEADING_ZERO_THRESHOLD:
        values.pop()
    if not values:
        values = [0j]
    return tuple(values)


@dataclass(frozen=True)
class Polynomial:
    """A complex polynomial; ``coeffs[k]`` multiplies z**k."""

    coeffs: tuple[complex, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "coeffs", _strip(self.coeffs))

    @classmethod
    def monomial(cls, degree: int, leading: complex = 1) -> "Polynomial":
        """Return ``leading * z**degree``."""
        return cls((0,) * degree + (leading,))

    @classmethod
    def from_roots(cls, roots: Sequence[complex], leading: complex = 1) -> "Polynomial":
        """Return ``leading * prod(z - r)``."""
        coeffs = np.polynomial.polynomial.polyfromroots(np.asarray(roots, dtype=complex))
        return cls(tuple(leading * coeffs))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def leading(self) -> complex:
        return self.coeffs[-1]

    def as_array(self) -> np.ndarray:
        return np.asarray(self.coeffs, dtype=complex)

    def __call__(self, z):
        return evaluate(self, z)

    def __add__(self, other) -> "Polynomial":
        if not isinstance(other, Polynomial):
            other = Polynomial((other,))
        size = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (0j,) * (size - len(self.coeffs))
        b = other.coeffs + (0j,) * (size - len(other.coeffs))
        return Polynomial(tuple(x + y for x, y in zip(a, b)))

    def __neg__(self) -> "Polynomial":
        return Polynomial(tuple(-c for c in self.coeffs))

    def __sub__(self, other) -> "Polynomial":
        if not isinstance(other, Polynomial):
            other = Polynomial((other,))
        return self + (-other)

    def __str__(self) -> str:
        return format_polynomial(self)


IDENTITY_POLY = Polynomial((0, 1))


@dataclass(frozen=True)
class AffineMap:
    """L(z) = alpha·z + beta with alpha ≠ 0."""

    alpha: complex
    beta: complex = 0j

    def __post_init__(self) -> None:
        object.__setattr__(self, "alpha", complex(self.alpha))
        object.__setattr__(self, "beta", complex(self.beta))
        if not abs(self.alpha) > 0:
            raise ValueError("AffineMap scale alpha must be nonzero")

    @classmethod
    def identity(cls) -> "AffineMap":
        return cls(1, 0)

    def __call__(self, z):
        return self.alpha * z + self.beta

    def inverse(self) -> "AffineMap":
        return AffineMap(1 / self.alpha, -self.beta / self.alpha)

    def as_polynomial(self) -> Polynomial:
        return Polynomial((self.beta, self.alpha))


# ---------------------------------------------------------------------------
# Evaluation
# ---------------------------------------------------------------------------

def evaluate(p: Polynomial, z):
    """
    Return p(z) by Horner's rule.

    Works on scalars and on numpy arrays.  Overflow is not raised: the result
    is then non-finite, which callers detect with ``cmath.isfinite``.
    """
    coeffs = p.coeffs
    result = coeffs[-1] + 0 * z
    for c in reversed(coeffs[:-1]):
        result = result * z + c
    return result


def evaluate_with_derivative(p: Polynomial, z):
    """Return (p(z), p'(z)) from a single Horner pass."""
    coeffs = p.coeffs
    value = coeffs[-1] + 0 * z
    slope = 0 * value
    for c in reversed(coeffs[:-1]):
        slope = slope * z + value
        value = value * z + c
    return value, slope


def derivative(p: Polynomial) -> Polynomial:
    """Return p′; the derivative of a constant is the zero polynomial."""
    if p.degree == 0:
        return Polynomial((0,))
    return Polynomial(tuple(k * c for k, c in enumerate(p.coeffs) if k > 0))


# ---------------------------------------------------------------------------
# Composition and iteration
# ---------------------------------------------------------------------------

def compose(p: Polynomial, q: Polynomial, max_degree: int | None = None) -> Polynomial:
    """
    Return the coefficients of p(q(z)).

    Horner's rule over the polynomial ring: multiply the accumulator by q and
    add the next coefficient of p.

    Raises:
        DegreeOverflow: if degree(p)·degree(q) exceeds *max_degree*
            (default ``config.MAX_DEGREE``).
    """
    limit = config.MAX_DEGREE if max_degree is None else max_degree
    if p.degree * q.degree > limit:
        raise DegreeOverflow(
            f"composed degree {p.degree * q.degree} exceeds max_degree {limit}"
        )
    if p.degree == 0:
        return p
    inner = q.as_array()
    acc = np.array([p.coeffs[-1]], dtype=complex)
    for c in reversed(p.coeffs[:-1]):
        acc = np.convolve(acc, inner)
        acc[0] += c
    return Polynomial(tuple(acc))


def iterate(p: Polynomial, n: int, max_degree: int | None = None) -> Polynomial:
    """Return the n-th iterate pⁿ = pⁿ⁻¹ ∘ p (p¹ = p)."""
    if n < 1:
        raise ValueError(f"iterate requires n >= 1, got {n}")
    limit = config.MAX_DEGREE if max_degree is None else max_degree
    if p.degree ** n > limit:
        raise DegreeOverflow(f"iterated degree {p.degree}**{n} exceeds max_degree {limit}")
    result = p
    for _ in range(n - 1):
        result = compose(result, p, limit)
    return result


def orbit(p: Polynomial, z0: complex, n: int) -> list[complex]:
    """
    Return [z0, p(z0), …, pⁿ(z0)] evaluated step by step on p.

    A non-finite entry means the orbit overflowed; see :func:`orbit_is_finite`.
    """
    if n < 0:
        raise ValueError(f"orbit length must be non-negative, got {n}")
    points = [complex(z0)]
    z = complex(z0)
    for _ in range(n):
        z = complex(evaluate(p, z))
        points.append(z)
    return points


def orbit_is_finite(points: Sequence[complex]) -> bool:
    return all(cmath.isfinite(z) for z in points)


# ---------------------------------------------------------------------------
# Affine conjugation
# ---------------------------------------------------------------------------

def affine_conjugate(p: Polynomial, L: AffineMap) -> Polynomial:
    """Return L⁻¹ ∘ p ∘ L, a polynomial of the same degree as p."""
    outer = L.inverse().as_polynomial()
    return compose(outer, compose(p, L.as_polynomial()))


def normalize(p: Polynomial) -> tuple[Polynomial, AffineMap]:
    """
    Return the monic centered conjugate of p and the map L achieving it.

    α is the principal (d−1)-th root of 1/a_d and β = −a_{d−1}/(d·a_d), so
    L⁻¹ ∘ p ∘ L = z^d + a_{d−2}z^{d−2} + … + a₀.  The leading and sub-leading
    coefficients are set exactly.
    """
    d = p.degree
    if d < 2:
        raise DegreeTooLow("degree must be at least 2")
    lead = p.coeffs[-1]
    alpha = cmath.exp(-cmath.log(lead) / (d - 1))
    beta = -p.coeffs[-2] / (d * lead)
    L = AffineMap(alpha, beta)
    coeffs = list(affine_conjugate(p, L).coeffs)
    coeffs[-1] = 1 + 0j
    coeffs[-2] = 0j
    return Polynomial(tuple(coeffs)), L


# ---------------------------------------------------------------------------
# Text form
# ---------------------------------------------------------------------------

def parse_complex(token: str) -> complex:
    """Parse ``a``, ``a+bi``, ``a-bi`` or ``bi`` into a complex number."""
    text = token.strip().replace(" ", "")
    if not text:
        raise PolynomialParseError("empty coefficient")
    try:
        if not text.endswith("i"):
            value = complex(float(text), 0.0)
        else:
            body = text[:-1]
            split = None
            for k in range(len(body) - 1, 0, -1):
                if body[k] in "+-" and body[k - 1] not in "eE":
                    split = k
                    break
            real, imag = ("0", body) if split is None else (body[:split], body[split:])
            if imag in ("", "+", "-"):
                imag += "1"
            value = complex(float(real), float(imag))
    except ValueError as exc:
        raise PolynomialParseError(f"cannot parse coefficient {token!r}") from exc
    if not cmath.isfinite(value):
        raise PolynomialParseError(f"coefficient {token!r} is not finite")
    return value


def format_complex(z: complex) -> str:
    """Inverse of :func:`parse_complex`; round-trips bit-exactly."""
    z = complex(z)
    re_, im = z.real, z.imag
    if im == 0.0 and math.copysign(1.0, im) > 0:
        return repr(re_)
    if re_ == 0.0 and math.copysign(1.0, re_) > 0:
        return f"{im!r}i"
    sign = "+" if math.copysign(1.0, im) > 0 else "-"
    return f"{re_!r}{sign}{abs(im)!r}i"


def parse_polynomial(text: str) -> Polynomial:
    """Parse the comma-separated, constant-first text form."""
    if text is None or not text.strip():
        raise PolynomialParseError("empty polynomial")
    return Polynomial(tuple(parse_complex(tok) for tok in text.split(",")))


def format_polynomial(p: Polynomial) -> str:
    return ",".join(format_complex(c) for c in p.coeffs)
