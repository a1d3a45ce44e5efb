"""
Exception hierarchy — iterfix

Input errors (bad text, wrong degree, wrong parameter length) and numerical
failures (no convergence, inconsistent estimates) are kept apart so the CLI
can map them onto distinct exit codes.
"""


class IterfixError(Exception):
    """Base class for every error raised by the library."""


# Input errors ────────────────────────────────────────────────────────────────

class PolynomialParseError(IterfixError, ValueError):
    """Text could not be parsed as a comma-separated coefficient list."""


class DegreeTooLow(IterfixError, ValueError):
    """The polynomial has degree below what the operation requires."""


class DegreeOverflow(IterfixError, ValueError):
    """A composed or iterated degree would exceed the configured maximum."""


class BadLength(IterfixError, ValueError):
    """A parameter vector does not match the expected length."""


# Numerical failures ──────────────────────────────────────────────────────────

class NoConvergence(IterfixError):
    """The root finder failed its residual test after the perturbed restart."""


class DerivativeVanishes(IterfixError):
    """Newton's method met a derivative of modulus below 1e-300."""


class CInconsistent(IterfixError):
    """Estimates of c from different w-samples disagree beyond tolerance."""


class IdentityMismatch(IterfixError):
    """A proved algebraic identity failed numerically (a solver problem)."""
