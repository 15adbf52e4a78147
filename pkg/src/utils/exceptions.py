"""
Custom exceptions for the semi-harmonic well toolkit
Provides specific exception types so callers (and the CLI exit-code map)
can tell bad input, numerical trouble and missing features apart
"""


class SemiHarmonicError(Exception):
    """Base exception for all toolkit errors"""
    def __init__(self, message: str, error_code: str = None, details: dict = None):
        super().__init__(message)
        self.message = message
        self.error_code = error_code
        self.details = details or {}


class ModelError(SemiHarmonicError):
    """Base exception for invalid geometry or arguments outside a model's domain"""
    pass


class DomainError(ModelError):
    """Raised when an argument lies outside the domain of an operation"""
    def __init__(self, message: str, value: float = None, details: dict = None):
        super().__init__(message, "DOMAIN_ERROR", details)
        self.value = value


class VariantError(ModelError):
    """Raised when an operation is not defined for the given well variant"""
    def __init__(self, message: str = "Operation not defined for this well variant", details: dict = None):
        super().__init__(message, "VARIANT_ERROR", details)


class GeometryError(ModelError):
    """Raised when closed-form expressions are requested off their certified geometry"""
    def __init__(self, message: str = "Closed forms require a symmetric well (a = b)", details: dict = None):
        super().__init__(message, "GEOMETRY_ERROR", details)


class NumericalError(SemiHarmonicError):
    """Base exception for numerical failures"""
    pass


class PoleError(NumericalError):
    """Raised when a special function is evaluated at a pole"""
    def __init__(self, message: str = None, x: float = None, details: dict = None):
        if message is None:
            message = f"Pole of the gamma function at x = {x}"
        super().__init__(message, "POLE_ERROR", details)
        self.x = x


class ParameterError(NumericalError):
    """Raised when a series parameter makes the function undefined"""
    def __init__(self, message: str, details: dict = None):
        super().__init__(message, "PARAMETER_ERROR", details)


class SeriesConvergenceError(NumericalError):
    """Raised when a series fails to converge within its term budget"""
    def __init__(self, message: str, terms: int = None, details: dict = None):
        super().__init__(message, "SERIES_CONVERGENCE", details)
        self.terms = terms


class PrecisionError(NumericalError):
    """Raised when cancellation destroys too many significant digits"""
    def __init__(self, message: str, estimate: float = None, details: dict = None):
        super().__init__(message, "PRECISION_ERROR", details)
        self.estimate = estimate


class NodeError(NumericalError):
    """Raised when a logarithmic derivative is requested at a node of the wavefunction"""
    def __init__(self, message: str = "Wavefunction vanishes at the evaluation point", x: float = None,
                 details: dict = None):
        super().__init__(message, "NODE_ERROR", details)
        self.x = x


class StiffnessError(NumericalError):
    """Raised when the ODE integrator's step collapses"""
    def __init__(self, message: str = "Integrator step size collapsed", details: dict = None):
        super().__init__(message, "STIFFNESS_ERROR", details)


class GridError(NumericalError):
    """Raised when adaptive grid refinement exhausts its point budget"""
    def __init__(self, message: str = "Adaptive grid refinement budget exhausted", max_points: int = None,
                 details: dict = None):
        super().__init__(message, "GRID_ERROR", details)
        self.max_points = max_points


class DerivativeError(NumericalError):
    """Raised when a finite-difference stencil cannot be made branch consistent"""
    def __init__(self, message: str = "Phase stencil could not be unwrapped", details: dict = None):
        super().__init__(message, "DERIVATIVE_ERROR", details)


class FeatureNotFoundError(SemiHarmonicError):
    """Base exception for features (sign changes, maxima) absent from a window"""
    pass


class BracketError(FeatureNotFoundError):
    """Raised when a root bracket does not change sign"""
    def __init__(self, message: str = None, lo: float = None, hi: float = None, details: dict = None):
        if message is None:
            message = f"No sign change in bracket ({lo}, {hi})"
        super().__init__(message, "BRACKET_ERROR", details)
        self.lo = lo
        self.hi = hi


class ConfigurationError(SemiHarmonicError):
    """Base exception for configuration-related errors"""
    pass


class ConfigurationValidationError(ConfigurationError):
    """Raised when configuration validation fails"""
    def __init__(self, message: str, invalid_fields: list = None, details: dict = None):
        super().__init__(message, "CONFIG_VALIDATION_ERROR", details)
        self.invalid_fields = invalid_fields or []


class ConfigurationFileError(ConfigurationError):
    """Raised when a configuration file cannot be read or parsed"""
    def __init__(self, message: str, config_file: str = None, details: dict = None):
        super().__init__(message, "CONFIG_FILE_ERROR", details)
        self.config_file = config_file
