"""
Run configuration
"""

from .run_config import (
    RunConfig, RunConfigSchema, RawGeometry, AreaGeometry, DeltaGeometry,
    build_run_config, load_config_file
)

__all__ = [
    "RunConfig", "RunConfigSchema", "RawGeometry", "AreaGeometry", "DeltaGeometry",
    "build_run_config", "load_config_file"
]
