"""
Utility functions and helpers
"""

from .exceptions import (
    SemiHarmonicError, ModelError, DomainError, VariantError, GeometryError,
    NumericalError, PoleError, ParameterError, SeriesConvergenceError, PrecisionError,
    NodeError, StiffnessError, GridError, DerivativeError,
    FeatureNotFoundError, BracketError,
    ConfigurationError, ConfigurationValidationError, ConfigurationFileError
)
from .file_output import AtomicFileOperation, render_csv, render_json, write_csv, write_json

__all__ = [
    "SemiHarmonicError", "ModelError", "DomainError", "VariantError", "GeometryError",
    "NumericalError", "PoleError", "ParameterError", "SeriesConvergenceError", "PrecisionError",
    "NodeError", "StiffnessError", "GridError", "DerivativeError",
    "FeatureNotFoundError", "BracketError",
    "ConfigurationError", "ConfigurationValidationError", "ConfigurationFileError",
    "AtomicFileOperation", "render_csv", "render_json", "write_csv", "write_json"
]
