"""
Phase time and time delay

    v_g = dE/dk = 2k,   tau_p = (a + b)/v_g,   tau_W = tau_p - tau_E

tau_E is (1/v_g) d/dk of the reduced reflection phase. For a symmetric
finite well the phase comes from the phi1/phi2 closed form (with the
recorded sign PHASE_SIGN); every other geometry uses the reduced phase
delta + 2 k x_R directly. Both agree modulo 2 pi.
"""

import math
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np
from scipy import optimize

from src.core.model import WellConfig, area_family, delta_config
from src.core.scattering import DEFAULT_MAX_POINTS, PHASE_SIGN, phase_curve, closed_form_phase, reduced_phase
from src.utils.exceptions import BracketError, DerivativeError, DomainError

logger = logging.getLogger(__name__)

# tau_E is not evaluated below this energy; v_g -> 0 amplifies derivative noise
THRESHOLD_GUARD = 1e-4
EA_XTOL = 1e-7
MAXIMUM_XTOL = 1e-6
SCAN_POINTS = 64
DEFAULT_EA_WINDOW = (1e-3, 2.0)
DELTA_LIMIT_WIDTHS = (0.02, 0.01, 0.005, 0.0025)
DELTA_LIMIT_AGREEMENT = 1e-3


@dataclass(frozen=True)
class DelaySample:
    e: float
    tau_p: float
    tau_e: float
    tau_w: float


@dataclass
class FeatureSet:
    e_a: Optional[float] = None
    maxima: List[float] = field(default_factory=list)


@dataclass
class DelayCurve:
    cfg: WellConfig
    samples: List[DelaySample] = field(default_factory=list)
    features: FeatureSet = field(default_factory=FeatureSet)

    def __len__(self) -> int:
        return len(self.samples)

    @property
    def energies(self) -> np.ndarray:
        return np.array([s.e for s in self.samples])


@dataclass
class DeltaLimitReport:
    """E_a of the equal-area family as the width shrinks, extrapolated and compared with the delta well"""
    area: float
    widths: Tuple[float, ...]
    samples: List[float]
    table: List[List[float]]
    extrapolated: float
    explicit_delta: float

    @property
    def disagreement(self) -> float:
        return abs(self.extrapolated - self.explicit_delta)


last_delta_limit: Optional[DeltaLimitReport] = None


def group_velocity(e: float) -> float:
    if not e > 0:
        raise DomainError(f"Group velocity requires e > 0, got {e}", value=e)
    return 2.0 * math.sqrt(e)


def tau_p(cfg: WellConfig, e: float) -> float:
    """Classical flight time across the well"""
    v_g = group_velocity(e)
    if cfg.is_delta:
        return 0.0
    return cfg.width / v_g


def _timing_phase(cfg: WellConfig) -> Callable[[float], float]:
    if cfg.is_symmetric:
        return lambda k: PHASE_SIGN * closed_form_phase(cfg, k * k)
    return lambda k: reduced_phase(cfg, k * k)


def _central_difference(values: np.ndarray, h: float) -> float:
    # values at k - 2h, k - h, k + h, k + 2h
    return (values[0] - 8.0 * values[1] + 8.0 * values[2] - values[3]) / (12.0 * h)


def phase_derivative(cfg: WellConfig, e: float, h: float = None) -> float:
    """
    d/dk of the reduced phase by a 4-point central difference plus one
    Richardson step; the seven stencil values are unwrapped together
    """
    if e < THRESHOLD_GUARD:
        raise DomainError(f"tau_E is not evaluated below E = {THRESHOLD_GUARD}, got {e}", value=e)
    k = math.sqrt(e)
    if h is None:
        h = max(1e-4, 1e-3 * k)
    h = min(h, 0.25 * k)

    phase = _timing_phase(cfg)
    offsets = np.array([-2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0]) * h
    raw = np.array([phase(k + d) for d in offsets])
    values = np.unwrap(raw)
    if np.max(np.abs(np.diff(values))) > 0.5 * math.pi:
        raise DerivativeError(
            f"Phase moves by more than pi/2 across the stencil at E = {e} (h = {h})",
            details={"e": e, "h": h, "values": raw.tolist()}
        )
    coarse = _central_difference(values[[0, 1, 5, 6]], h)
    fine = _central_difference(values[[1, 2, 4, 5]], 0.5 * h)
    return (16.0 * fine - coarse) / 15.0


def tau_e(cfg: WellConfig, e: float, h: float = None) -> float:
    """Time delay (1/v_g) d(phase)/dk"""
    return phase_derivative(cfg, e, h) / group_velocity(e)


def tau_w(cfg: WellConfig, e: float) -> DelaySample:
    p = tau_p(cfg, e)
    d = tau_e(cfg, e)
    return DelaySample(e, p, d, p - d)


def phase_slope(cfg: WellConfig, e: float) -> float:
    """d delta / dE; for a = b this is -tau_W"""
    return tau_e(cfg, e) - 2.0 * cfg.matching_point / group_velocity(e)


def scan_for_sign_change(fn: Callable[[float], float], e_lo: float, e_hi: float,
                         n: int = SCAN_POINTS) -> Tuple[float, float]:
    """First (lo, hi) on a geometric grid where fn changes sign"""
    if not 0 < e_lo < e_hi:
        raise DomainError(f"Need 0 < e_lo < e_hi, got ({e_lo}, {e_hi})")
    grid = np.geomspace(e_lo, e_hi, n)
    previous_e, previous_v = float(grid[0]), fn(float(grid[0]))
    for e in grid[1:]:
        value = fn(float(e))
        if previous_v == 0.0:
            return previous_e, previous_e
        if previous_v * value < 0 or value == 0.0:
            return previous_e, float(e)
        previous_e, previous_v = float(e), value
    raise BracketError(lo=e_lo, hi=e_hi, details={"scan_points": n})


def _refine_root(fn: Callable[[float], float], lo: float, hi: float, xtol: float) -> float:
    if lo == hi:
        return lo
    return float(optimize.brentq(fn, lo, hi, xtol=xtol))


def bracket_sign_change(cfg: WellConfig, e_lo: float = DEFAULT_EA_WINDOW[0],
                        e_hi: float = DEFAULT_EA_WINDOW[1], n: int = SCAN_POINTS) -> Tuple[float, float]:
    """Bracket the lowest sign change of tau_E in (e_lo, e_hi)"""
    return scan_for_sign_change(lambda e: tau_e(cfg, e), max(e_lo, THRESHOLD_GUARD), e_hi, n)


def find_sign_change(cfg: WellConfig, e_lo: float, e_hi: float, xtol: float = EA_XTOL) -> float:
    """
    E_a inside a bracket whose endpoints give tau_E opposite signs

    The bracket is scanned first so the lowest crossing is returned when
    tau_E crosses zero more than once inside it.
    """
    fn = lambda e: tau_e(cfg, e)
    lo_value, hi_value = fn(e_lo), fn(e_hi)
    if lo_value * hi_value > 0:
        raise BracketError(lo=e_lo, hi=e_hi, details={"tau_e_lo": lo_value, "tau_e_hi": hi_value})
    lo, hi = scan_for_sign_change(fn, e_lo, e_hi)
    e_a = _refine_root(fn, lo, hi, xtol)
    logger.debug(f"E_a = {e_a:.8f} for {cfg.describe()} (bracket {lo:.6g}..{hi:.6g})")
    return e_a


def find_phase_turning(cfg: WellConfig, e_lo: float, e_hi: float, xtol: float = EA_XTOL) -> float:
    """Lowest energy in (e_lo, e_hi) where d delta/dE changes sign"""
    fn = lambda e: phase_slope(cfg, e)
    lo, hi = scan_for_sign_change(fn, max(e_lo, THRESHOLD_GUARD), e_hi)
    return _refine_root(fn, lo, hi, xtol)


def _refine_maximum(cfg: WellConfig, lo: float, mid: float, hi: float) -> float:
    result = optimize.minimize_scalar(
        lambda e: -tau_e(cfg, e), bracket=(lo, mid, hi), method="golden",
        tol=MAXIMUM_XTOL / mid
    )
    return float(result.x)


def _maxima_from_samples(cfg: WellConfig, energies: Sequence[float], values: Sequence[float]) -> List[float]:
    maxima = []
    for i in range(1, len(values) - 1):
        if values[i] > values[i - 1] and values[i] >= values[i + 1]:
            try:
                m = _refine_maximum(cfg, energies[i - 1], energies[i], energies[i + 1])
            except ValueError as e:
                logger.warning(f"Golden-section refinement failed near E = {energies[i]:.6g}: {e}")
                m = float(energies[i])
            if not maxima or m - maxima[-1] > MAXIMUM_XTOL:
                maxima.append(m)
    return sorted(maxima)


def _delay_grid(cfg: WellConfig, e_min: float, e_max: float, n0: int, max_points: int) -> np.ndarray:
    energies = phase_curve(cfg, max(e_min, THRESHOLD_GUARD), e_max, n0, max_points).energies
    return energies[energies >= THRESHOLD_GUARD]


def delay_maxima(cfg: WellConfig, e_min: float, e_max: float, n0: int = 400,
                 max_points: int = DEFAULT_MAX_POINTS) -> FeatureSet:
    """Local maxima of tau_E on the adaptive phase grid, refined by golden section"""
    if not 0 < e_min < e_max:
        raise DomainError(f"Need 0 < e_min < e_max, got ({e_min}, {e_max})")
    energies = _delay_grid(cfg, e_min, e_max, n0, max_points)
    values = [tau_e(cfg, float(e)) for e in energies]
    maxima = _maxima_from_samples(cfg, energies, values)
    logger.info(f"{len(maxima)} time-delay maxima for {cfg.describe()} on ({e_min}, {e_max})")
    return FeatureSet(e_a=None, maxima=maxima)


def _sample(args) -> DelaySample:
    cfg, e = args
    return tau_w(cfg, e)


def delay_curve(cfg: WellConfig, e_min: float, e_max: float, n0: int = 400, workers: int = 1,
                max_points: int = DEFAULT_MAX_POINTS) -> DelayCurve:
    """tau_p, tau_E and tau_W on the adaptive phase grid, with E_a and the maxima located"""
    if not 0 < e_min < e_max:
        raise DomainError(f"Need 0 < e_min < e_max, got ({e_min}, {e_max})")
    energies = [float(e) for e in _delay_grid(cfg, e_min, e_max, n0, max_points)]

    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            samples = list(pool.map(_sample, [(cfg, e) for e in energies], chunksize=32))
    else:
        samples = [tau_w(cfg, e) for e in energies]

    values = [s.tau_e for s in samples]
    features = FeatureSet(maxima=_maxima_from_samples(cfg, energies, values))
    crossing = next((i for i in range(len(values) - 1) if values[i] * values[i + 1] < 0), None)
    if crossing is not None:
        features.e_a = _refine_root(lambda e: tau_e(cfg, e), energies[crossing], energies[crossing + 1], EA_XTOL)

    logger.info(f"Delay curve for {cfg.describe()}: {len(samples)} samples, "
                f"E_a = {features.e_a}, {len(features.maxima)} maxima")
    return DelayCurve(cfg, samples, features)


def _lowest_ea(cfg: WellConfig) -> float:
    lo, hi = bracket_sign_change(cfg)
    return find_sign_change(cfg, lo, hi)


def _richardson_in_width(samples: Sequence[float]) -> List[List[float]]:
    """Neville table for halving widths, error orders a, a^2, a^3, ..."""
    table = [[s] for s in samples]
    for i in range(1, len(samples)):
        for j in range(1, i + 1):
            factor = 2.0 ** j
            table[i].append((factor * table[i][j - 1] - table[i - 1][j - 1]) / (factor - 1.0))
    return table


def delta_limit_report(area: float, widths: Sequence[float] = DELTA_LIMIT_WIDTHS) -> DeltaLimitReport:
    """
    E_a as a -> 0 at fixed area, two ways: Richardson extrapolation of the
    equal-area family and the explicit delta well of strength `area`
    """
    global last_delta_limit
    if area <= 0:
        raise DomainError(f"Area must be positive, got {area}", value=area)

    samples = []
    for a in widths:
        samples.append(_lowest_ea(area_family(area, a)))
        logger.debug(f"E_a(a={a}) = {samples[-1]:.10f}")
    table = _richardson_in_width(samples)
    explicit = _lowest_ea(delta_config(area))

    report = DeltaLimitReport(
        area=area, widths=tuple(widths), samples=samples, table=table,
        extrapolated=table[-1][-1], explicit_delta=explicit
    )
    if report.disagreement > DELTA_LIMIT_AGREEMENT:
        logger.warning(f"Delta limit disagreement {report.disagreement:.3g}: extrapolated "
                       f"{report.extrapolated:.8f}, explicit delta {explicit:.8f}")
    last_delta_limit = report
    return report


def delta_limit_ea(area: float) -> float:
    return delta_limit_report(area).extrapolated
