"""Moller-operator S-matrix engine.

Thin wrapper over the C++ core: presets, config validation, and end-to-end
runs returning numpy arrays.
"""

from ._mollerscat import (
    ConfigError,
    EngineError,
    preset,
    preset_names,
    run,
    run_and_export,
    shot_plan,
    validate,
)

__all__ = [
    "ConfigError",
    "EngineError",
    "preset",
    "preset_names",
    "run",
    "run_and_export",
    "shot_plan",
    "validate",
]
