"""Python front end for the chemofront solvers.

Config-driven entry points accept either a dict or JSON text.
"""

import json as _json

from . import _core
from ._core import (
    AssertionFailure,
    ChemofrontError,
    CoefficientField,
    ConfigError,
    ModelParams,
    HypothesisViolation,
    NumericalError,
    StabilityError,
    check_hypotheses,
    compute_K,
    compute_M,
    compute_M0,
    compute_m0,
    experiment_presets,
    find_l_star,
    find_l_star_star,
    logistic_orbit,
    potential_oracle_reflection,
    principal_eigenvalue,
    solve_potential,
    stefan_velocity,
)

__all__ = [
    "AssertionFailure",
    "ChemofrontError",
    "CoefficientField",
    "ConfigError",
    "ModelParams",
    "HypothesisViolation",
    "NumericalError",
    "StabilityError",
    "check_hypotheses",
    "compute_K",
    "compute_M",
    "compute_M0",
    "compute_m0",
    "config_digest",
    "experiment_presets",
    "find_l_star",
    "find_l_star_star",
    "logistic_orbit",
    "normalize_config",
    "potential_oracle_reflection",
    "principal_eigenvalue",
    "run",
    "run_experiment",
    "run_sweep",
    "solve_potential",
    "spectrum_report",
    "stefan_velocity",
]


def _text(config):
    return config if isinstance(config, str) else _json.dumps(config)


def normalize_config(config=None):
    return _json.loads(_core.normalize_config(_text(config or {})))


def config_digest(config=None):
    return _core.config_digest(_text(config or {}))


def run(config=None, overrides=()):
    """Run one config. Returns verdict, digest, series columns, manifest and final profile."""
    out = _core.run_config(_text(config or {}), list(overrides))
    out["manifest"] = _json.loads(out["manifest"])
    return out


def run_sweep(config, jobs=1):
    """Phase table CSV text for config["sweep"]["axes"]."""
    return _core.run_sweep(_text(config), jobs)


def spectrum_report(config=None):
    return _json.loads(_core.spectrum_report(_text(config or {})))


def run_experiment(preset, overrides=(), out_dir="", jobs=1):
    return _json.loads(_core.run_experiment(preset, list(overrides), out_dir, jobs))
