"""
Exact solution of the harmonic region x < -a

The solution of psi'' = (x^2 - k^2) psi that decays as x -> -infinity is

    psi(x) = exp(-x^2/2) [ c1 1F1(alpha, 1/2; x^2) + c2 x 1F1(alpha + 1/2, 3/2; x^2) ]

with alpha = (1 - k^2)/4 and c2/c1 = 2 Gamma((3-k^2)/4) / Gamma((1-k^2)/4).
The ratio is kept projective so the poles of either gamma factor (k^2 = 1, 5,
9, ... and k^2 = 3, 7, 11, ...) are ordinary evaluation points. Only psi'/psi
is used downstream, so the overall scale is irrelevant.
"""

import math
import logging
from dataclasses import dataclass
from typing import Optional, Tuple

from scipy.integrate import solve_ivp

from src.core.specfun import EPS, gamma, kummer_1f1, kummer_1f1_dz
from src.utils.exceptions import (
    DomainError, NodeError, PoleError, PrecisionError, StiffnessError
)

logger = logging.getLogger(__name__)

SERIES_MAX_X = 3.0
PRECISION_LIMIT = 1e-6
NODE_TOLERANCE = 1e-12

DEFAULT_X_START = -8.0
ODE_RTOL = 1e-12
ODE_ATOL = 1e-12
# |L| beyond this means psi is about to vanish; switch to the linear system
RICCATI_POLE_LIMIT = 1e6


@dataclass(frozen=True)
class Coefficients:
    """Projective pair (c1, c2) with max(|c1|, |c2|) = 1; scale is the divisor applied to (1, 2C)"""
    c1: float
    c2: float
    scale: float = 1.0

    def negated(self) -> "Coefficients":
        return Coefficients(-self.c1, -self.c2, -self.scale)


@dataclass(frozen=True)
class SolutionPair:
    """(psi, psi') at one point, up to the common factor scale_note"""
    psi: float
    dpsi: float
    scale_note: float = 1.0

    @property
    def magnitude(self) -> float:
        return max(abs(self.psi), abs(self.dpsi))

    def log_derivative(self, x: float = None) -> float:
        if abs(self.psi) < NODE_TOLERANCE * self.magnitude or self.magnitude == 0.0:
            raise NodeError(x=x, details={"psi": self.psi, "dpsi": self.dpsi})
        return self.dpsi / self.psi


def _normalized(c1: float, c2: float) -> Coefficients:
    scale = max(abs(c1), abs(c2))
    c1, c2 = c1 / scale, c2 / scale
    if c1 < 0 or (c1 == 0 and c2 < 0):
        c1, c2, scale = -c1, -c2, -scale
    return Coefficients(c1, c2, scale)


def coefficients(k2: float) -> Coefficients:
    """Projective form of (1, 2 Gamma((3-k^2)/4) / Gamma((1-k^2)/4))"""
    alpha = (1.0 - k2) / 4.0
    try:
        denominator = gamma(alpha).value
    except PoleError:
        return Coefficients(1.0, 0.0)
    try:
        numerator = gamma(alpha + 0.5).value
    except PoleError:
        return Coefficients(0.0, 1.0)
    return _normalized(1.0, 2.0 * numerator / denominator)


def psi_pair(k2: float, x: float, coeffs: Optional[Coefficients] = None) -> SolutionPair:
    """
    Evaluate (psi, psi') from the series representation

    The derivative is the analytic one, taken through z = x^2. The error
    estimate collects the 1F1 error estimates and the rounding of the sum of
    the two (individually growing) branches; it is compared against the
    projective magnitude max(|psi|, |psi'|) so nodes of psi stay legal.
    """
    if abs(x) > SERIES_MAX_X:
        raise DomainError(
            f"|x| = {abs(x)} lies outside the certified series domain |x| <= {SERIES_MAX_X}",
            value=x
        )
    if coeffs is None:
        coeffs = coefficients(k2)
    c1, c2 = coeffs.c1, coeffs.c2

    alpha = (1.0 - k2) / 4.0
    z = x * x
    damp = math.exp(-0.5 * z)

    m1 = kummer_1f1(alpha, 0.5, z)
    d1 = kummer_1f1_dz(alpha, 0.5, z)
    m2 = kummer_1f1(alpha + 0.5, 1.5, z)
    d2 = kummer_1f1_dz(alpha + 0.5, 1.5, z)

    even = c1 * m1.value
    odd = c2 * x * m2.value
    bracket = even + odd
    d_even = c1 * 2.0 * x * d1.value
    d_odd = c2 * (m2.value + 2.0 * z * d2.value)
    d_bracket = d_even + d_odd

    psi = damp * bracket
    dpsi = damp * (d_bracket - x * bracket)

    err_bracket = (abs(c1) * m1.est_abs_error + abs(c2 * x) * m2.est_abs_error
                   + 4.0 * EPS * (abs(even) + abs(odd)))
    err_d_bracket = (abs(c1) * 2.0 * abs(x) * d1.est_abs_error
                     + abs(c2) * (m2.est_abs_error + 2.0 * z * d2.est_abs_error)
                     + 4.0 * EPS * (abs(d_even) + abs(d_odd)))
    err = damp * max(err_bracket, err_d_bracket + abs(x) * err_bracket)

    magnitude = max(abs(psi), abs(dpsi))
    if err > PRECISION_LIMIT * magnitude:
        raise PrecisionError(
            f"Cancellation in the series leaves relative error {err / magnitude:.3g} at x = {x}, k2 = {k2}",
            estimate=err, details={"k2": k2, "x": x}
        )
    return SolutionPair(psi, dpsi, coeffs.scale)


def log_derivative(k2: float, x: float) -> float:
    """psi'/psi of the decaying solution, independent of the projective scale"""
    return psi_pair(k2, x).log_derivative(x)


def _asymptotic_log_derivative(k2: float, x_start: float) -> float:
    # psi ~ |x|^((k2-1)/2) exp(-x^2/2) on the decaying branch
    return -x_start + (k2 - 1.0) / (2.0 * x_start)


def _linear_rhs(k2: float):
    def rhs(t, y):
        return [y[1], (t * t - k2) * y[0]]
    return rhs


def _integrate_linear(k2: float, t0: float, t1: float, y0: Tuple[float, float]) -> SolutionPair:
    if t1 == t0:
        return SolutionPair(y0[0], y0[1])
    sol = solve_ivp(_linear_rhs(k2), (t0, t1), list(y0), method="DOP853", rtol=ODE_RTOL, atol=ODE_ATOL)
    if sol.status < 0:
        raise StiffnessError(
            f"Linear integration failed between {t0} and {t1}: {sol.message}",
            details={"k2": k2, "t0": t0, "t1": t1}
        )
    return SolutionPair(float(sol.y[0, -1]), float(sol.y[1, -1]))


def log_derivative_ode(k2: float, x: float, x_start: float = DEFAULT_X_START) -> float:
    """
    Independent oracle for psi'/psi: integrate L' = (t^2 - k2) - L^2 from x_start to x

    The decaying branch is the attracting one in this direction, so the
    asymptotic initial value only needs to be roughly right. Should psi have a
    node on the way, L runs off to -infinity; integration then continues on
    the linear (psi, psi') system across the node.
    """
    if x_start > -6.0:
        raise DomainError(f"x_start must be <= -6, got {x_start}", value=x_start)
    if not x_start < x <= 0.0:
        raise DomainError(f"Need x_start < x <= 0, got x={x}, x_start={x_start}", value=x)

    def rhs(t, y):
        return [t * t - k2 - y[0] * y[0]]

    def near_pole(t, y):
        return abs(y[0]) - RICCATI_POLE_LIMIT
    near_pole.terminal = True

    sol = solve_ivp(rhs, (x_start, x), [_asymptotic_log_derivative(k2, x_start)],
                    method="DOP853", rtol=ODE_RTOL, atol=ODE_ATOL, events=near_pole)
    if sol.status < 0:
        raise StiffnessError(
            f"Riccati integration failed for k2 = {k2}: {sol.message}",
            details={"k2": k2, "x": x, "x_start": x_start}
        )
    if sol.status == 0:
        return float(sol.y[0, -1])

    t_pole = float(sol.t_events[0][0])
    l_pole = float(sol.y_events[0][0][0])
    logger.warning(f"Riccati solution reached |L| = {abs(l_pole):.3g} at t = {t_pole:.6f}; "
                 f"continuing on the linear system (k2 = {k2})")
    pair = _integrate_linear(k2, t_pole, x, (1.0, l_pole))
    return pair.log_derivative(x)


def _forbidden_start(k2: float, x: float) -> float:
    """Start point of the linear integration, past the turning point x = -sqrt(k2)"""
    return min(DEFAULT_X_START, x - 5.0, -math.sqrt(max(k2, 0.0)) - 6.0)


def solution_at(k2: float, x: float) -> SolutionPair:
    """
    (psi, psi') of the decaying solution at any x <= 3, up to scale

    Uses the series inside its certified domain and the linear ODE started deep
    in the forbidden region otherwise, or when the series loses precision at
    high k2.
    """
    if abs(x) <= SERIES_MAX_X:
        try:
            return psi_pair(k2, x)
        except PrecisionError as e:
            if x > 0:
                raise
            logger.debug(f"Series precision lost at x = {x}, k2 = {k2} ({e.message}); integrating instead")
    elif x > 0:
        raise DomainError(f"The harmonic region is x < 0; got x = {x}", value=x)
    x_start = _forbidden_start(k2, x)
    return _integrate_linear(k2, x_start, x, (1.0, _asymptotic_log_derivative(k2, x_start)))


def ode_residual(k2: float, x: float, h: float = 1e-3) -> float:
    """Relative residual of psi'' = (x^2 - k2) psi with a 5-point second difference"""
    coeffs = coefficients(k2)
    samples = [psi_pair(k2, x + j * h, coeffs).psi for j in (-2, -1, 0, 1, 2)]
    second = (-samples[0] + 16.0 * samples[1] - 30.0 * samples[2]
              + 16.0 * samples[3] - samples[4]) / (12.0 * h * h)
    centre = psi_pair(k2, x, coeffs)
    return abs(second - (x * x - k2) * centre.psi) / centre.magnitude
