"""
Core numerics: special functions, the well model, the harmonic-region
solution, step ladders, scattering, timing and bound states
"""

from . import specfun, model, harmonic, stepladder, scattering, timing, spectra
from .model import WellConfig, WellVariant, area_family, delta_config, finite_config, unit_area_symmetric

__all__ = [
    "specfun", "model", "harmonic", "stepladder", "scattering", "timing", "spectra",
    "WellConfig", "WellVariant", "area_family", "delta_config", "finite_config", "unit_area_symmetric"
]
