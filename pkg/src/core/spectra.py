"""
Bound states of the semi-harmonic well

A bound state decays as e^{-kappa x} (kappa = sqrt(-E)) to the right of the
matching point, so it is a zero of the homogeneous mismatch

    F(E) = (psi'(x_R) + kappa psi(x_R)) / max(|psi(x_R)|, |psi'(x_R)|)

with (psi, psi') coming from the region to the left. The left region is
pluggable: the harmonic solution by default, a flat V = 0 region for
comparison, or the step ladder as an independent oracle.
"""

import math
import logging
from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np
from scipy import optimize

from src.core.harmonic import SolutionPair, solution_at
from src.core.model import WellConfig, area_family
from src.core.stepladder import (
    DEFAULT_LADDER_STEPS, DEFAULT_X_MIN, discretize_harmonic, ladder_profile,
    propagate_well, segment_matrix, well_ladder
)
from src.utils.exceptions import BracketError, DomainError

logger = logging.getLogger(__name__)

SCAN_POINTS = 2000
BOUND_XTOL = 1e-12
NODE_PROFILE_STEPS = 4000
NODE_PROFILE_WELL_STEPS = 400
LADDER_SCAN_POINTS = 400
LADDER_SCAN_STEPS = 2000

# (k2, x) -> (psi, psi') of the left-region solution at x, up to scale
Background = Callable[[float, float], SolutionPair]


@dataclass(frozen=True)
class BoundState:
    e: float
    index: int
    nodes: Optional[int] = None


def harmonic_background(k2: float, x: float) -> SolutionPair:
    return solution_at(k2, x)


def flat_background(k2: float, x: float) -> SolutionPair:
    """V = 0 to the left: psi = e^{kappa (x' - x)} seen from x"""
    return SolutionPair(1.0, math.sqrt(-k2))


def energy_window(cfg: WellConfig) -> Tuple[float, float]:
    """Open interval that holds every bound state"""
    if cfg.is_delta:
        return -1.5 * cfg.g * cfg.g / 4.0 - 1e-3, 0.0
    return -cfg.v0, 0.0


def _check_window(cfg: WellConfig, e: float):
    lower, upper = energy_window(cfg)
    if not lower < e < upper:
        raise DomainError(f"Bound-state energy {e} outside ({lower}, {upper}) for {cfg.describe()}", value=e)


def _mismatch(e: float, pair: SolutionPair) -> float:
    kappa = math.sqrt(-e)
    return (pair.dpsi + kappa * pair.psi) / pair.magnitude


def matching_pair(cfg: WellConfig, e: float, background: Background = None) -> SolutionPair:
    background = background or harmonic_background
    pair = background(e, cfg.left_edge)
    if cfg.is_delta:
        return SolutionPair(pair.psi, pair.dpsi - cfg.g * pair.psi)
    psi, dpsi = segment_matrix(e, -cfg.v0, cfg.width).apply(pair.psi, pair.dpsi)
    return SolutionPair(psi, dpsi)


def matching_function(cfg: WellConfig, e: float, background: Background = None) -> float:
    _check_window(cfg, e)
    return _mismatch(e, matching_pair(cfg, e, background))


def ladder_matching_function(cfg: WellConfig, e: float, n: int = DEFAULT_LADDER_STEPS,
                             x_min: float = DEFAULT_X_MIN) -> float:
    _check_window(cfg, e)
    return _mismatch(e, propagate_well(cfg, e, n, x_min))


def count_nodes(cfg: WellConfig, e: float, n: int = NODE_PROFILE_STEPS, x_min: float = DEFAULT_X_MIN) -> int:
    """Sign changes of psi on [x_min, x_R]; psi has none beyond x_R"""
    if cfg.is_delta:
        steps = discretize_harmonic(x_min, 0.0, n)
    else:
        steps = well_ladder(cfg, n, x_min, well_steps=NODE_PROFILE_WELL_STEPS)
    signs = np.sign(ladder_profile(e, steps))
    signs = signs[signs != 0]
    return int(np.count_nonzero(signs[1:] != signs[:-1]))


def _scan_brackets(fn: Callable[[float], float], grid: np.ndarray) -> List[Tuple[float, float]]:
    values = [fn(float(e)) for e in grid]
    brackets = []
    for i in range(len(grid) - 1):
        if values[i] == 0.0:
            brackets.append((float(grid[i]), float(grid[i])))
        elif values[i] * values[i + 1] < 0:
            brackets.append((float(grid[i]), float(grid[i + 1])))
    return brackets


def _scan_grid(cfg: WellConfig, points: int) -> np.ndarray:
    lower, upper = energy_window(cfg)
    return np.linspace(lower, upper, points + 2)[1:-1]


def bound_states(cfg: WellConfig, background: Background = None, scan_points: int = SCAN_POINTS,
                 xtol: float = BOUND_XTOL) -> List[BoundState]:
    """
    Every bound state in the energy window, sorted by energy

    With the harmonic background the i-th state is checked to have i nodes;
    a mismatch points at two roots inside one scan cell and is logged.
    """
    fn = lambda e: matching_function(cfg, e, background)
    states = []
    for index, (lo, hi) in enumerate(_scan_brackets(fn, _scan_grid(cfg, scan_points))):
        e = lo if lo == hi else float(optimize.bisect(fn, lo, hi, xtol=xtol))
        nodes = None
        if background is None:
            nodes = count_nodes(cfg, e)
            if nodes != index:
                logger.warning(f"Bound state {index} of {cfg.describe()} at E = {e:.10f} has {nodes} nodes")
        states.append(BoundState(e, index, nodes))
    logger.debug(f"{len(states)} bound states for {cfg.describe()}")
    return states


def ladder_bound_states(cfg: WellConfig, n: int = DEFAULT_LADDER_STEPS, x_min: float = DEFAULT_X_MIN,
                        xtol: float = BOUND_XTOL) -> List[BoundState]:
    """
    Bound states with the parabolic region replaced by an n-step ladder

    Roots are bracketed on a coarse ladder, then widened until the fine
    ladder changes sign and refined with brentq.
    """
    coarse = lambda e: ladder_matching_function(cfg, e, LADDER_SCAN_STEPS, x_min)
    fine = lambda e: ladder_matching_function(cfg, e, n, x_min)
    lower, upper = energy_window(cfg)

    states = []
    for index, (lo, hi) in enumerate(_scan_brackets(coarse, _scan_grid(cfg, LADDER_SCAN_POINTS))):
        width = max(hi - lo, 1e-6)
        f_lo, f_hi = fine(lo), fine(hi)
        for _ in range(8):
            if f_lo * f_hi <= 0:
                break
            lo = max(lo - width, 0.5 * (lower + lo))
            hi = min(hi + width, 0.5 * (hi + upper))
            f_lo, f_hi = fine(lo), fine(hi)
        else:
            raise BracketError(lo=lo, hi=hi, details={"cfg": cfg.describe(), "n": n})
        e = lo if f_lo == 0.0 else hi if f_hi == 0.0 else float(optimize.brentq(fine, lo, hi, xtol=xtol))
        states.append(BoundState(e, index))
    return states


def count_by_area(area: float, a_values: Sequence[float]) -> List[int]:
    """Bound-state counts along the equal-area family b = a, v0 = area/(2a)"""
    counts = [len(bound_states(area_family(area, a))) for a in a_values]
    logger.info(f"Bound-state counts at area {area}: {dict(zip(a_values, counts))}")
    return counts
