"""
Run configuration for the command-line surface
Schema validation of flag and file values, key=value config files and the
immutable RunConfig handed to the commands
"""

import os
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, Optional, Union

from src.core.model import WellConfig, area_family, delta_config, finite_config
from src.utils.exceptions import (
    ConfigurationFileError, ConfigurationValidationError, ModelError
)

logger = logging.getLogger(__name__)

COMMANDS = ("phase", "delay", "ea", "bound", "validate", "cutoff")
WORKERS_ENV = "SEMIHARMONIC_WORKERS"
DEFAULT_WINDOW = (1e-3, 1.0)
TOLERANCE_KEYS = ("ea_xtol", "bound_xtol", "max_points", "ladder_steps", "x_min")


@dataclass(frozen=True)
class RawGeometry:
    a: float
    b: float
    v0: float

    def to_well(self) -> WellConfig:
        return finite_config(self.a, self.b, self.v0)


@dataclass(frozen=True)
class AreaGeometry:
    area: float
    a: float

    def to_well(self) -> WellConfig:
        return area_family(self.area, self.a)


@dataclass(frozen=True)
class DeltaGeometry:
    g: float

    def to_well(self) -> WellConfig:
        return delta_config(self.g)


Geometry = Union[RawGeometry, AreaGeometry, DeltaGeometry]


class RunConfigSchema:
    """Field table for run settings, shared by flags and config files"""

    def __init__(self):
        self.schema = {
            'a': {
                'type': float,
                'min_value': 0.0,
                'description': 'Left half-width of the well (harmonic region starts at -a)'
            },
            'b': {
                'type': float,
                'min_value': 0.0,
                'description': 'Right edge of the well'
            },
            'v0': {
                'type': float,
                'min_value': 0.0,
                'description': 'Well depth'
            },
            'area': {
                'type': float,
                'min_value': 0.0,
                'description': 'Well area (a+b) v0 of the symmetric family b = a'
            },
            'delta': {
                'type': float,
                'min_value': 0.0,
                'description': 'Strength g of a delta well'
            },
            'emin': {
                'type': float,
                'min_value': 0.0,
                'description': 'Lower end of the energy window'
            },
            'emax': {
                'type': float,
                'min_value': 0.0,
                'description': 'Upper end of the energy window'
            },
            'n0': {
                'type': int,
                'default': 400,
                'min_value': 2,
                'max_value': 1000000,
                'description': 'Initial number of uniform energy points'
            },
            'output': {
                'type': str,
                'description': 'Output file (stdout when absent)'
            },
            'format': {
                'type': str,
                'default': 'csv',
                'choices': ['csv', 'json'],
                'description': 'Output format'
            },
            'json': {
                'type': str,
                'description': 'Path of the JSON validation report'
            },
            'only': {
                'type': str,
                'choices': ['reference', 'oracles', 'structure'],
                'description': 'Restrict validation to one group of checks'
            },
            'workers': {
                'type': int,
                'min_value': 1,
                'max_value': 256,
                'description': 'Worker processes for grid evaluation'
            },
            'e0': {
                'type': float,
                'description': 'Baseline shift of the waveguide cutoff profile (default v0)'
            },
            'cutoff_steps': {
                'type': int,
                'default': 200,
                'min_value': 1,
                'max_value': 1000000,
                'description': 'Harmonic sections in the waveguide profile'
            },
            'ea_xtol': {
                'type': float,
                'default': 1e-7,
                'min_value': 1e-14,
                'max_value': 1e-2,
                'description': 'Energy tolerance for E_a refinement'
            },
            'bound_xtol': {
                'type': float,
                'default': 1e-12,
                'min_value': 1e-15,
                'max_value': 1e-2,
                'description': 'Energy tolerance for bound-state bisection'
            },
            'max_points': {
                'type': int,
                'default': 200000,
                'min_value': 10,
                'max_value': 10000000,
                'description': 'Point budget of the adaptive phase grid'
            },
            'ladder_steps': {
                'type': int,
                'default': 100000,
                'min_value': 10,
                'max_value': 10000000,
                'description': 'Steps of the harmonic ladder in oracle checks'
            },
            'x_min': {
                'type': float,
                'default': -8.0,
                'max_value': -6.0,
                'description': 'Left truncation of the harmonic ladder'
            },
        }

    def coerce(self, raw: Dict[str, Any]) -> Dict[str, Any]:
        """Convert string values (from files or the environment) to their schema types"""
        converted = {}
        errors = []
        for key, value in raw.items():
            if key not in self.schema:
                errors.append(f"Unknown setting '{key}'")
                continue
            expected = self.schema[key]['type']
            if value is None or isinstance(value, expected):
                converted[key] = value
                continue
            if expected is float and isinstance(value, int) and not isinstance(value, bool):
                converted[key] = float(value)
                continue
            try:
                converted[key] = expected(str(value).strip())
            except ValueError:
                errors.append(f"Field '{key}' must be of type {expected.__name__}, got '{value}'")
        if errors:
            raise ConfigurationValidationError("; ".join(errors), invalid_fields=errors)
        return converted

    def validate_config(self, config: Dict[str, Any]) -> Dict[str, Any]:
        """
        Validate settings against the schema

        Returns:
            Dict with is_valid, errors, warnings, validated_config and defaults_applied
        """
        result = {
            'is_valid': True,
            'errors': [],
            'warnings': [],
            'validated_config': {},
            'defaults_applied': []
        }
        validated_config = {}

        for key in config:
            if key not in self.schema:
                result['warnings'].append(f"Ignoring unknown setting '{key}'")

        for field_name, field_config in self.schema.items():
            value = config.get(field_name)

            if value is None and 'default' in field_config:
                validated_config[field_name] = field_config['default']
                result['defaults_applied'].append(field_name)
                continue
            if value is None:
                continue

            if not isinstance(value, field_config['type']) or isinstance(value, bool):
                result['is_valid'] = False
                result['errors'].append(
                    f"Field '{field_name}' must be of type {field_config['type'].__name__}, "
                    f"got {type(value).__name__}"
                )
                continue

            if field_config['type'] in (int, float):
                if 'min_value' in field_config and value < field_config['min_value']:
                    result['is_valid'] = False
                    result['errors'].append(
                        f"Field '{field_name}' must be >= {field_config['min_value']}, got {value}"
                    )
                if 'max_value' in field_config and value > field_config['max_value']:
                    result['is_valid'] = False
                    result['errors'].append(
                        f"Field '{field_name}' must be <= {field_config['max_value']}, got {value}"
                    )

            if 'choices' in field_config and value not in field_config['choices']:
                result['is_valid'] = False
                result['errors'].append(
                    f"Field '{field_name}' must be one of {field_config['choices']}, got '{value}'"
                )

            validated_config[field_name] = value

        result['validated_config'] = validated_config
        return result


def load_config_file(path: Union[str, Path]) -> Dict[str, Any]:
    """
    Read key=value lines; blank lines and '#' comments are skipped and keys
    use the flag names with '-' replaced by '_'
    """
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise ConfigurationFileError(f"Cannot read config file {path}: {e}", config_file=str(path))

    raw = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            raise ConfigurationFileError(
                f"{path}:{lineno}: expected key=value, got '{stripped}'",
                config_file=str(path), details={"line": lineno}
            )
        key, value = (part.strip() for part in stripped.split("=", 1))
        key = key.lstrip("-").replace("-", "_")
        if not key:
            raise ConfigurationFileError(f"{path}:{lineno}: empty key", config_file=str(path))
        raw[key] = value

    logger.debug(f"Loaded {len(raw)} settings from {path}")
    return RunConfigSchema().coerce(raw)


@dataclass(frozen=True)
class RunConfig:
    command: str
    geometry: Optional[Geometry] = None
    e_min: Optional[float] = None
    e_max: Optional[float] = None
    n0: int = 400
    output: Optional[str] = None
    fmt: str = "csv"
    tolerances: Dict[str, Any] = field(default_factory=dict)
    only: Optional[str] = None
    workers: int = 1
    report: Optional[str] = None
    e0: Optional[float] = None
    cutoff_steps: int = 200

    @property
    def well(self) -> WellConfig:
        if self.geometry is None:
            raise ConfigurationValidationError(f"Command '{self.command}' needs a well geometry")
        return self.geometry.to_well()

    def tolerance(self, name: str) -> Any:
        return self.tolerances[name]

    @property
    def has_window(self) -> bool:
        return self.e_min is not None and self.e_max is not None


def _geometry_from(values: Dict[str, Any]) -> Optional[Geometry]:
    present = {key for key in ('a', 'b', 'v0', 'area', 'delta') if values.get(key) is not None}
    if not present:
        return None
    if 'delta' in present:
        if present != {'delta'}:
            raise ConfigurationValidationError(
                "--delta cannot be combined with other geometry flags", invalid_fields=sorted(present)
            )
        return DeltaGeometry(values['delta'])
    if 'area' in present:
        if present != {'area', 'a'}:
            raise ConfigurationValidationError(
                "--area needs --a and excludes --b/--v0", invalid_fields=sorted(present)
            )
        return AreaGeometry(values['area'], values['a'])
    if present != {'a', 'b', 'v0'}:
        raise ConfigurationValidationError(
            "Raw geometry needs all of --a, --b and --v0", invalid_fields=sorted({'a', 'b', 'v0'} - present)
        )
    return RawGeometry(values['a'], values['b'], values['v0'])


def _default_workers(env: Dict[str, str]) -> int:
    override = env.get(WORKERS_ENV)
    if not override:
        return 1
    try:
        workers = int(override)
    except ValueError:
        raise ConfigurationValidationError(f"{WORKERS_ENV} must be an integer, got '{override}'")
    if workers < 1:
        raise ConfigurationValidationError(f"{WORKERS_ENV} must be >= 1, got {workers}")
    return workers


def build_run_config(command: str, values: Dict[str, Any], file_values: Dict[str, Any] = None,
                     env: Dict[str, str] = None) -> RunConfig:
    """
    Merge file values with flag values (flags win), validate and assemble a RunConfig
    """
    if command not in COMMANDS:
        raise ConfigurationValidationError(f"Unknown command '{command}'", invalid_fields=['command'])
    env = os.environ if env is None else env

    merged = dict(file_values or {})
    merged.update({k: v for k, v in values.items() if v is not None})
    merged = RunConfigSchema().coerce(merged)

    result = RunConfigSchema().validate_config(merged)
    for warning in result['warnings']:
        logger.warning(warning)
    if not result['is_valid']:
        raise ConfigurationValidationError("; ".join(result['errors']), invalid_fields=result['errors'])
    settings = result['validated_config']

    geometry = _geometry_from(settings)
    if geometry is None and command != 'validate':
        raise ConfigurationValidationError(
            f"Command '{command}' needs one of --area/--a, --a/--b/--v0 or --delta"
        )
    if geometry is not None:
        try:
            geometry.to_well()
        except ModelError as e:
            raise ConfigurationValidationError(f"Invalid geometry: {e.message}", details=e.details)

    e_min, e_max = settings.get('emin'), settings.get('emax')
    if command in ('phase', 'delay'):
        e_min = DEFAULT_WINDOW[0] if e_min is None else e_min
        e_max = DEFAULT_WINDOW[1] if e_max is None else e_max
    if (e_min is None) != (e_max is None) and command == 'ea':
        raise ConfigurationValidationError("--emin and --emax must be given together")
    if e_min is not None and e_max is not None and command in ('phase', 'delay', 'ea'):
        if not 0 < e_min < e_max:
            raise ConfigurationValidationError(
                f"Energy window must satisfy 0 < emin < emax, got ({e_min}, {e_max})",
                invalid_fields=['emin', 'emax']
            )

    workers = settings.get('workers') or _default_workers(env)
    config = RunConfig(
        command=command,
        geometry=geometry,
        e_min=e_min,
        e_max=e_max,
        n0=settings['n0'],
        output=settings.get('output'),
        fmt=settings['format'],
        tolerances={key: settings[key] for key in TOLERANCE_KEYS},
        only=settings.get('only'),
        workers=workers,
        report=settings.get('json'),
        e0=settings.get('e0'),
        cutoff_steps=settings['cutoff_steps'],
    )
    logger.debug(f"Run configuration: {config}")
    return config
