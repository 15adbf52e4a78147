"""
Piecewise-constant potentials and transfer matrices

The parabolic region is replaced by a ladder of constant steps (midpoint
rule) and (psi, psi') is carried across every step by its exact 2x2
transfer matrix. The ladder is the independent oracle for the series
solution, and its step heights double as the cutoff-frequency profile of
the equivalent chain of waveguide sections.
"""

import math
import logging
from dataclasses import dataclass
from typing import List, Tuple

import numpy as np

from src.core.harmonic import NODE_TOLERANCE, SolutionPair
from src.core.model import WellConfig
from src.utils.exceptions import DomainError, NodeError, VariantError

logger = logging.getLogger(__name__)

DEFAULT_X_MIN = -8.0
DEFAULT_LADDER_STEPS = 100000
# Below this |E - V| a segment is treated as free drift
FREE_DRIFT_TOLERANCE = 1e-12


@dataclass(frozen=True, eq=False)
class StepPotential:
    """Constant values[i] on (edges[i], edges[i+1])"""
    edges: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        edges = np.asarray(self.edges, dtype=float)
        values = np.asarray(self.values, dtype=float)
        if values.ndim != 1 or len(values) < 1:
            raise DomainError("A step potential needs at least one segment")
        if len(edges) != len(values) + 1:
            raise DomainError(f"Expected {len(values) + 1} edges for {len(values)} segments, got {len(edges)}")
        if not np.all(np.isfinite(edges)) or not np.all(np.isfinite(values)):
            raise DomainError("Step potential edges and values must be finite")
        if np.any(np.diff(edges) <= 0):
            raise DomainError("Step potential edges must be strictly increasing")
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "values", values)

    def __len__(self) -> int:
        return len(self.values)

    @property
    def widths(self) -> np.ndarray:
        return np.diff(self.edges)

    @property
    def x_left(self) -> float:
        return float(self.edges[0])

    @property
    def x_right(self) -> float:
        return float(self.edges[-1])

    def extended(self, x_right: float, value: float, steps: int = 1) -> "StepPotential":
        """Append `steps` equal segments of constant value up to x_right"""
        new_edges = np.linspace(self.x_right, x_right, steps + 1)[1:]
        return StepPotential(
            np.concatenate([self.edges, new_edges]),
            np.concatenate([self.values, np.full(steps, float(value))])
        )


@dataclass(frozen=True)
class TransferMatrix:
    """Acts on the column (psi, psi')"""
    m11: float
    m12: float
    m21: float
    m22: float

    @property
    def det(self) -> float:
        return self.m11 * self.m22 - self.m12 * self.m21

    def apply(self, psi: float, dpsi: float) -> Tuple[float, float]:
        return self.m11 * psi + self.m12 * dpsi, self.m21 * psi + self.m22 * dpsi

    def __matmul__(self, other: "TransferMatrix") -> "TransferMatrix":
        return TransferMatrix(
            self.m11 * other.m11 + self.m12 * other.m21,
            self.m11 * other.m12 + self.m12 * other.m22,
            self.m21 * other.m11 + self.m22 * other.m21,
            self.m21 * other.m12 + self.m22 * other.m22,
        )


def segment_matrix(e: float, v: float, w: float) -> TransferMatrix:
    """Exact propagation of (psi, psi') across width w of constant potential v"""
    if not w > 0:
        raise DomainError(f"Segment width must be positive, got {w}", value=w)
    local = e - v
    if abs(local) < FREE_DRIFT_TOLERANCE:
        return TransferMatrix(1.0, w, 0.0, 1.0)
    if local > 0:
        kappa = math.sqrt(local)
        c, s = math.cos(kappa * w), math.sin(kappa * w)
        return TransferMatrix(c, s / kappa, -kappa * s, c)
    mu = math.sqrt(-local)
    ch, sh = math.cosh(mu * w), math.sinh(mu * w)
    return TransferMatrix(ch, sh / mu, mu * sh, ch)


def _segment_elements(e: float, steps: StepPotential):
    """Vectorised segment_matrix over a whole ladder"""
    local = e - steps.values
    w = steps.widths
    root = np.sqrt(np.abs(local))
    phase = root * w
    safe_root = np.where(root > 0, root, 1.0)

    oscillating = local >= FREE_DRIFT_TOLERANCE
    evanescent = local <= -FREE_DRIFT_TOLERANCE

    m11 = np.ones_like(w)
    m12 = w.copy()
    m21 = np.zeros_like(w)

    cos_p, sin_p = np.cos(phase), np.sin(phase)
    with np.errstate(over="ignore"):
        cosh_p, sinh_p = np.cosh(phase), np.sinh(phase)

    m11 = np.where(oscillating, cos_p, np.where(evanescent, cosh_p, m11))
    m12 = np.where(oscillating, sin_p / safe_root, np.where(evanescent, sinh_p / safe_root, m12))
    m21 = np.where(oscillating, -root * sin_p, np.where(evanescent, root * sinh_p, m21))
    return m11, m12, m21, m11


def discretize_harmonic(x_min: float, x_match: float, n: int) -> StepPotential:
    """Midpoint-rule ladder for V = x^2 on [x_min, x_match]"""
    if not x_min < x_match <= 0.0:
        raise DomainError(f"Need x_min < x_match <= 0, got x_min={x_min}, x_match={x_match}")
    if n < 1:
        raise DomainError(f"Need at least one step, got n={n}", value=n)
    edges = np.linspace(x_min, x_match, n + 1)
    midpoints = 0.5 * (edges[:-1] + edges[1:])
    return StepPotential(edges, midpoints * midpoints)


def well_ladder(cfg: WellConfig, n: int = DEFAULT_LADDER_STEPS, x_min: float = DEFAULT_X_MIN,
                well_steps: int = 1) -> StepPotential:
    """Harmonic ladder on [x_min, -a] followed by the well on [-a, b]"""
    if cfg.is_delta:
        raise VariantError("A delta well cannot be written as a step potential")
    return discretize_harmonic(x_min, -cfg.a, n).extended(cfg.b, -cfg.v0, well_steps)


def _initial_pair(e: float, steps: StepPotential) -> Tuple[float, float]:
    first = float(steps.values[0])
    if not e < first:
        raise DomainError(
            f"The leftmost step must be classically forbidden: need E < {first}, got {e}", value=e
        )
    return 1.0, math.sqrt(first - e)


def ladder_propagate(e: float, steps: StepPotential) -> SolutionPair:
    """
    Carry the decaying-to-the-left solution across every step

    (psi, psi') is renormalised by max(|psi|, |psi'|) after each step; the
    product of those factors is not tracked, only the direction of the pair.
    """
    psi, dpsi = _initial_pair(e, steps)
    m11, m12, m21, m22 = _segment_elements(e, steps)
    for a11, a12, a21, a22 in zip(m11.tolist(), m12.tolist(), m21.tolist(), m22.tolist()):
        psi, dpsi = a11 * psi + a12 * dpsi, a21 * psi + a22 * dpsi
        scale = max(abs(psi), abs(dpsi))
        psi /= scale
        dpsi /= scale
    return SolutionPair(psi, dpsi)


def ladder_profile(e: float, steps: StepPotential) -> np.ndarray:
    """psi at every edge; values are renormalised step by step, so only their signs are comparable"""
    psi, dpsi = _initial_pair(e, steps)
    m11, m12, m21, m22 = _segment_elements(e, steps)
    profile = np.empty(len(steps) + 1)
    profile[0] = psi
    for i, (a11, a12, a21, a22) in enumerate(zip(m11.tolist(), m12.tolist(), m21.tolist(), m22.tolist())):
        psi, dpsi = a11 * psi + a12 * dpsi, a21 * psi + a22 * dpsi
        scale = max(abs(psi), abs(dpsi))
        psi /= scale
        dpsi /= scale
        profile[i + 1] = psi
    return profile


def ladder_log_derivative(e: float, steps: StepPotential) -> float:
    pair = ladder_propagate(e, steps)
    if abs(pair.psi) < NODE_TOLERANCE * pair.magnitude:
        raise NodeError(x=steps.x_right, details={"e": e, "psi": pair.psi, "dpsi": pair.dpsi})
    return pair.dpsi / pair.psi


def propagate_well(cfg: WellConfig, e: float, n: int = DEFAULT_LADDER_STEPS,
                   x_min: float = DEFAULT_X_MIN) -> SolutionPair:
    """(psi, psi') at the matching point with the harmonic region discretised; handles both variants"""
    if cfg.is_delta:
        pair = ladder_propagate(e, discretize_harmonic(x_min, 0.0, n))
        return SolutionPair(pair.psi, pair.dpsi - cfg.g * pair.psi)
    return ladder_propagate(e, well_ladder(cfg, n, x_min))


def cutoff_profile(steps: StepPotential, e0: float) -> List[float]:
    """Cutoff frequencies sqrt(V_i + e0) of the equivalent waveguide sections"""
    shifted = steps.values + e0
    if np.any(shifted < 0):
        worst = float(shifted.min())
        raise DomainError(
            f"Baseline shift e0 = {e0} leaves a negative cutoff squared ({worst})",
            value=e0, details={"min_shifted": worst}
        )
    return np.sqrt(shifted).tolist()


@dataclass(frozen=True)
class WaveguideSection:
    x_left: float
    x_right: float
    v: float
    omega_c: float


def waveguide_profile(cfg: WellConfig, n: int = 200, x_min: float = DEFAULT_X_MIN,
                      e0: float = None) -> List[WaveguideSection]:
    """
    Waveguide chain equivalent to the well: one section per harmonic step
    plus one for the well, with the baseline raised by e0 (default v0, so the
    well section has zero cutoff)
    """
    if e0 is None:
        e0 = cfg.v0
    steps = well_ladder(cfg, n, x_min)
    omegas = cutoff_profile(steps, e0)
    sections = [
        WaveguideSection(float(lo), float(hi), float(v), omega)
        for lo, hi, v, omega in zip(steps.edges[:-1], steps.edges[1:], steps.values, omegas)
    ]
    logger.debug(f"Waveguide profile for {cfg.describe()}: {len(sections)} sections, e0 = {e0}")
    return sections
