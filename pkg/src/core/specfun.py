"""
Special functions for the parabolic-region solution
Gamma function with typed pole reporting and Kummer's confluent
hypergeometric function 1F1(a, c; z) summed as a Taylor series with an
absolute error estimate attached to every value
"""

import math
import logging
from dataclasses import dataclass

import numpy as np
from scipy import special

from src.utils.exceptions import (
    DomainError, ParameterError, PoleError, SeriesConvergenceError
)

logger = logging.getLogger(__name__)

EPS = float(np.finfo(float).eps)

# Non-positive integers closer than this are treated as poles of gamma
POLE_TOLERANCE = 1e-12

# Certified domain of the series: the harmonic module never needs more than x^2 = 9
KUMMER_MAX_Z = 25.0
KUMMER_MAX_TERMS = 1000
KUMMER_SMALL_RUN = 3


@dataclass(frozen=True)
class SpecialValue:
    """Finite function value together with an absolute error estimate"""
    value: float
    est_abs_error: float

    def __float__(self) -> float:
        return self.value


def is_nonpositive_integer(x: float, tol: float = POLE_TOLERANCE) -> bool:
    """True when x sits on (or within tol of) 0, -1, -2, ..."""
    return x <= tol and abs(x - round(x)) <= tol


def gamma(x: float) -> SpecialValue:
    """
    Gamma function with poles reported as PoleError

    Values come from scipy.special.gamma; the error estimate accounts for the
    reflection formula used at negative arguments, whose relative error grows
    as the argument approaches a pole.
    """
    if not math.isfinite(x):
        raise DomainError(f"gamma requires a finite argument, got {x}", value=x)
    if is_nonpositive_integer(x):
        raise PoleError(x=x, details={"x": x, "tolerance": POLE_TOLERANCE})

    value = float(special.gamma(x))
    if not math.isfinite(value):
        raise DomainError(f"gamma overflows at x = {x}", value=x)

    amplification = 4.0
    if x < 0:
        distance = abs(x - round(x))
        amplification += abs(x) + 1.0 / distance
    return SpecialValue(value, abs(value) * EPS * amplification)


def _check_kummer_args(a: float, c: float, z: float):
    if not (math.isfinite(a) and math.isfinite(c) and math.isfinite(z)):
        raise DomainError(f"1F1 requires finite arguments, got ({a}, {c}, {z})")
    if is_nonpositive_integer(c):
        raise ParameterError(
            f"1F1 is undefined for c = {c} (non-positive integer)",
            details={"a": a, "c": c, "z": z}
        )
    if abs(z) > KUMMER_MAX_Z:
        raise DomainError(
            f"|z| = {abs(z)} exceeds the certified series domain |z| <= {KUMMER_MAX_Z}",
            value=z, details={"a": a, "c": c, "z": z}
        )


def kummer_1f1(a: float, c: float, z: float) -> SpecialValue:
    """
    Kummer's function 1F1(a, c; z) from its Taylor series

    Terms follow t_{n+1} = t_n (a+n) z / ((c+n)(n+1)). Summation stops once
    three consecutive terms fall below EPS times the partial sum, and only
    after the terms are past their peak (n >= |z|), so a term that happens to
    be tiny early on cannot end the sum. The error estimate is dominated by
    cancellation: EPS times the largest partial sum or term seen.
    """
    _check_kummer_args(a, c, z)

    term = 1.0
    total = 1.0
    max_magnitude = 1.0
    small_run = 0
    n = 0
    while small_run < KUMMER_SMALL_RUN:
        if n >= KUMMER_MAX_TERMS:
            raise SeriesConvergenceError(
                f"1F1({a}, {c}; {z}) did not converge in {KUMMER_MAX_TERMS} terms",
                terms=n, details={"a": a, "c": c, "z": z}
            )
        term *= (a + n) * z / ((c + n) * (n + 1))
        total += term
        n += 1
        max_magnitude = max(max_magnitude, abs(total), abs(term))
        if n >= abs(z) and abs(term) <= EPS * abs(total):
            small_run += 1
        else:
            small_run = 0

    est = 2.0 * EPS * max_magnitude + EPS * n * abs(total)
    return SpecialValue(total, est)


def kummer_1f1_dz(a: float, c: float, z: float) -> SpecialValue:
    """d/dz 1F1(a, c; z) = (a/c) 1F1(a+1, c+1; z)"""
    _check_kummer_args(a, c, z)
    if a == 0.0:
        return SpecialValue(0.0, 0.0)
    shifted = kummer_1f1(a + 1.0, c + 1.0, z)
    factor = a / c
    return SpecialValue(factor * shifted.value, abs(factor) * shifted.est_abs_error)
