"""
Reflection from the semi-harmonic well

A wave e^{-ikx} arriving from the right is fully reflected as S e^{ikx}.
With (psi, psi') of the decaying solution carried to the matching point x_R,

    S = e^{-2ik x_R} (ik psi + psi') / (ik psi - psi'),    |S| = 1,

evaluated in homogeneous form so nodes of psi at x_R are regular points.
"""

import cmath
import math
import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterator, List

import numpy as np

from src.core.harmonic import SolutionPair, solution_at
from src.core.model import WellConfig, wavenumbers
from src.core.stepladder import (
    DEFAULT_LADDER_STEPS, DEFAULT_X_MIN, propagate_well, segment_matrix
)
from src.utils.exceptions import DomainError, GeometryError, GridError, VariantError

logger = logging.getLogger(__name__)

# delta + 2 k b = pi + PHASE_SIGN * closed_form_phase (mod 2 pi) for a = b
PHASE_SIGN = -1.0

DEFAULT_MAX_POINTS = 200000
MAX_PHASE_GAP = 0.5 * math.pi


class PhiForm(Enum):
    """MATCHED follows from carrying psi across the well; PRINTED keeps the published coefficients"""
    MATCHED = "matched"
    PRINTED = "printed"


@dataclass(frozen=True)
class ReflectionPoint:
    e: float
    s_re: float
    s_im: float
    delta: float

    @property
    def s(self) -> complex:
        return complex(self.s_re, self.s_im)

    @property
    def modulus(self) -> float:
        return math.hypot(self.s_re, self.s_im)


@dataclass(frozen=True)
class PhiPair:
    phi1: float
    phi2: float


@dataclass
class PhaseCurve:
    """Unwrapped reflection phase on an adaptively refined energy grid"""
    cfg: WellConfig
    points: List[ReflectionPoint] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self) -> Iterator[ReflectionPoint]:
        return iter(self.points)

    def __getitem__(self, index):
        return self.points[index]

    @property
    def energies(self) -> np.ndarray:
        return np.array([p.e for p in self.points])

    @property
    def deltas(self) -> np.ndarray:
        return np.array([p.delta for p in self.points])


def wrap_phase(angle: float) -> float:
    """Map to (-pi, pi]"""
    wrapped = math.remainder(angle, 2.0 * math.pi)
    return math.pi if wrapped == -math.pi else wrapped


def interior_pair(cfg: WellConfig, e: float) -> SolutionPair:
    """(psi, psi') just left of the matching point, up to scale"""
    if cfg.is_delta:
        pair = solution_at(e, 0.0)
        return SolutionPair(pair.psi, pair.dpsi - cfg.g * pair.psi, pair.scale_note)
    pair = solution_at(e, -cfg.a)
    psi, dpsi = segment_matrix(e, -cfg.v0, cfg.width).apply(pair.psi, pair.dpsi)
    return SolutionPair(psi, dpsi, pair.scale_note)


def interior_log_derivative(cfg: WellConfig, e: float) -> float:
    return interior_pair(cfg, e).log_derivative(cfg.matching_point)


def _amplitude_from_pair(cfg: WellConfig, e: float, pair: SolutionPair) -> ReflectionPoint:
    k = math.sqrt(e)
    outgoing = complex(pair.dpsi, k * pair.psi)
    s = -cmath.exp(-2j * k * cfg.matching_point) * outgoing / outgoing.conjugate()
    return ReflectionPoint(e, s.real, s.imag, math.atan2(s.imag, s.real))


def reflection_amplitude(cfg: WellConfig, e: float) -> ReflectionPoint:
    """S = e^{i delta} at one energy; delta is the principal value"""
    if not e > 0:
        raise DomainError(f"Scattering requires e > 0, got {e}", value=e)
    return _amplitude_from_pair(cfg, e, interior_pair(cfg, e))


def ladder_reflection_amplitude(cfg: WellConfig, e: float, n: int = DEFAULT_LADDER_STEPS,
                                x_min: float = DEFAULT_X_MIN) -> ReflectionPoint:
    """S with the parabolic region replaced by an n-step ladder on [x_min, -a]"""
    if not e > 0:
        raise DomainError(f"Scattering requires e > 0, got {e}", value=e)
    return _amplitude_from_pair(cfg, e, propagate_well(cfg, e, n, x_min))


def reduced_phase(cfg: WellConfig, e: float) -> float:
    """delta + 2 k x_R, the reflection phase without the free flight to the matching point"""
    if not e > 0:
        raise DomainError(f"Scattering requires e > 0, got {e}", value=e)
    pair = interior_pair(cfg, e)
    return math.pi + 2.0 * math.atan2(math.sqrt(e) * pair.psi, pair.dpsi)


def phase_curve(cfg: WellConfig, e_min: float, e_max: float, n0: int,
                max_points: int = DEFAULT_MAX_POINTS) -> PhaseCurve:
    """
    delta(E) on a grid refined until no wrapped step exceeds pi/2, then unwrapped

    Refinement bisects offending intervals breadth first; the first point
    keeps its principal value.
    """
    if not 0 < e_min < e_max:
        raise DomainError(f"Need 0 < e_min < e_max, got ({e_min}, {e_max})")
    if n0 < 2:
        raise DomainError(f"Need at least two starting points, got n0={n0}", value=n0)

    points = [reflection_amplitude(cfg, float(e)) for e in np.linspace(e_min, e_max, n0)]
    passes = 0
    while True:
        refined = [points[0]]
        inserted = 0
        for left, right in zip(points[:-1], points[1:]):
            if abs(wrap_phase(right.delta - left.delta)) > MAX_PHASE_GAP:
                mid = 0.5 * (left.e + right.e)
                if not left.e < mid < right.e:
                    raise GridError(
                        f"Phase still jumps by more than pi/2 across the unresolvable interval "
                        f"({left.e}, {right.e})", max_points=max_points
                    )
                refined.append(reflection_amplitude(cfg, mid))
                inserted += 1
            refined.append(right)
        points = refined
        if len(points) > max_points:
            raise GridError(
                f"Phase curve needs more than {max_points} points on ({e_min}, {e_max})",
                max_points=max_points, details={"cfg": cfg.describe()}
            )
        if not inserted:
            break
        passes += 1

    unwrapped = np.unwrap([p.delta for p in points])
    curve = PhaseCurve(cfg, [
        ReflectionPoint(p.e, p.s_re, p.s_im, float(d)) for p, d in zip(points, unwrapped)
    ])
    logger.debug(f"Phase curve for {cfg.describe()}: {len(curve)} points after {passes} refinement passes")
    return curve


def phi_pair(cfg: WellConfig, e: float, form: PhiForm = PhiForm.MATCHED) -> PhiPair:
    """
    phi1 and phi2 for a symmetric well, with L = psi'/psi at x = -a:

        MATCHED:  phi1 = -q sin 2qa + L cos 2qa,    phi2 = -k cos 2qa - (k/q) L sin 2qa
        PRINTED:  phi1 = -(q/2) sin 2qa + L cos 2qa, phi2 = -k cos 2qa - (1/q) L sin 2qa

    MATCHED is (psi', -k psi) at x = b divided by psi(-a).
    """
    if cfg.is_delta:
        raise VariantError("phi1/phi2 are defined for the finite well only")
    if cfg.a != cfg.b:
        raise GeometryError(details={"a": cfg.a, "b": cfg.b})
    k, q = wavenumbers(cfg, e)
    log_der = solution_at(e, -cfg.a).log_derivative(-cfg.a)
    s, c = math.sin(2.0 * q * cfg.a), math.cos(2.0 * q * cfg.a)
    if form is PhiForm.MATCHED:
        return PhiPair(-q * s + log_der * c, -k * c - (k / q) * log_der * s)
    return PhiPair(-0.5 * q * s + log_der * c, -k * c - log_der * s / q)


def closed_form_phase(cfg: WellConfig, e: float, form: PhiForm = PhiForm.MATCHED) -> float:
    """2 atan2(phi2, phi1): the regular lift of arctan(2 phi1 phi2 / (phi1^2 - phi2^2))"""
    phis = phi_pair(cfg, e, form)
    return 2.0 * math.atan2(phis.phi2, phis.phi1)
