"""
Semi-harmonic well geometry and unit conventions

Units are dimensionless with hbar^2/(2m) = 1 and a harmonic prefactor of 1,
so the stationary equation reads -psi'' + V(x) psi = E psi with E = k^2 and

    V(x) = x^2      for x < -a   (harmonic region)
    V(x) = -v0      for -a <= x <= b (rectangular well)
    V(x) = 0        for x > b    (flat region)

The delta variant replaces the well by -g delta(x) with the harmonic region
on x < 0 and the flat region on x > 0.
"""

import math
import logging
from dataclasses import dataclass
from enum import Enum
from typing import Tuple

from src.utils.exceptions import DomainError, VariantError

logger = logging.getLogger(__name__)

# Energies are plain floats in the E = k^2 convention
Energy = float


class WellVariant(Enum):
    """Kinds of well embedded in the semi-harmonic background"""
    FINITE = "finite"
    DELTA = "delta"


@dataclass(frozen=True)
class WellConfig:
    """Immutable well geometry: (a, b, v0) for a finite well, g for a delta well"""
    a: float
    b: float
    v0: float
    variant: WellVariant = WellVariant.FINITE
    g: float = 0.0

    def __post_init__(self):
        if self.variant is WellVariant.FINITE:
            if self.a < 0 or self.b < 0:
                raise DomainError(f"Well edges must be non-negative, got a={self.a}, b={self.b}")
            if self.a + self.b <= 0:
                raise DomainError("Finite well needs a + b > 0; use delta_config for a zero-width well")
            if self.v0 <= 0:
                raise DomainError(f"Well depth must be positive, got v0={self.v0}", value=self.v0)
        elif self.g <= 0:
            raise DomainError(f"Delta strength must be positive, got g={self.g}", value=self.g)

    @property
    def is_delta(self) -> bool:
        return self.variant is WellVariant.DELTA

    @property
    def width(self) -> float:
        return self.a + self.b

    @property
    def area(self) -> float:
        return self.g if self.is_delta else (self.a + self.b) * self.v0

    @property
    def left_edge(self) -> float:
        """Start of the well; the harmonic region lies to the left of it"""
        return 0.0 if self.is_delta else -self.a

    @property
    def matching_point(self) -> float:
        """x_R, where the interior solution meets the free region"""
        return 0.0 if self.is_delta else self.b

    @property
    def is_symmetric(self) -> bool:
        return not self.is_delta and self.a == self.b

    def describe(self) -> str:
        if self.is_delta:
            return f"delta(g={self.g:g})"
        return f"finite(a={self.a:g}, b={self.b:g}, v0={self.v0:g})"


def finite_config(a: float, b: float, v0: float) -> WellConfig:
    return WellConfig(a=float(a), b=float(b), v0=float(v0))


def area_family(area: float, a: float) -> WellConfig:
    """Symmetric well b = a with depth chosen so that (a+b) v0 = area"""
    if area <= 0:
        raise DomainError(f"Area must be positive, got {area}", value=area)
    if a <= 0:
        raise DomainError(f"Half-width must be positive, got a={a}; use delta_config for a = 0", value=a)
    return WellConfig(a=float(a), b=float(a), v0=area / (2.0 * a))


def unit_area_symmetric(a: float) -> WellConfig:
    """Member of the unit-area family: b = a, v0 = 1/(2a)"""
    return area_family(1.0, a)


def delta_config(g: float) -> WellConfig:
    if g <= 0:
        raise DomainError(f"Delta strength must be positive, got g={g}", value=g)
    return WellConfig(a=0.0, b=0.0, v0=0.0, variant=WellVariant.DELTA, g=float(g))


def potential(cfg: WellConfig, x: float) -> float:
    """Pointwise potential; the delta variant has none"""
    if cfg.is_delta:
        raise VariantError("The delta well has no pointwise potential", details={"x": x})
    if x < -cfg.a:
        return x * x
    if x <= cfg.b:
        return -cfg.v0
    return 0.0


def wavenumbers(cfg: WellConfig, e: Energy) -> Tuple[float, float]:
    """Scattering wavenumbers k = sqrt(e) outside and q = sqrt(v0 + e) inside the well"""
    if cfg.is_delta:
        raise VariantError("The delta well has no interior wavenumber")
    if not e > 0:
        raise DomainError(f"Scattering requires e > 0, got {e}", value=e)
    return math.sqrt(e), math.sqrt(cfg.v0 + e)


def well_wavenumber(cfg: WellConfig, e: Energy) -> float:
    """q = sqrt(v0 + e), valid for any e above the well bottom"""
    if cfg.is_delta:
        raise VariantError("The delta well has no interior wavenumber")
    if not e > -cfg.v0:
        raise DomainError(f"q requires e > -v0 = {-cfg.v0}, got {e}", value=e)
    return math.sqrt(cfg.v0 + e)
