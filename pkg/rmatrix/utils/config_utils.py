"""Configuration utilities for rmatrix.

Handles loading, merging, and validating configuration files, and the
global tolerance multiplier taken from the environment.
"""

import copy
import logging
import os
from pathlib import Path
from typing import Any, Mapping

import yaml

logger = logging.getLogger(__name__)

TOLERANCE_ENV_VAR = "RMATRIX_TOL_OVERRIDE"

# Default configuration
DEFAULT_CONFIG: dict[str, Any] = {
    "tolerances": {
        "closure": 1e-10,  # commutator re-expansion defect
        "identity": 1e-12,  # exact algebraic identities
        "finite_difference": 1e-5,  # relative, gradient oracle
        "projection": 1e-8,  # L^l leaving the basis span
        "invariance": 1e-8,  # ad-invariance of the symmetric part
        "mcybe": 1e-10,
        "tensor": 1e-11,  # Schouten / <r,r> / CYBE tensors
        "dual_jacobi": 1e-8,
        "factorisation": 1e-11,
        "conservation": 1e-8,
        "solver_agreement": 1e-6,
        "path_agreement": 1e-9,  # g_plus vs g_minus conjugation
        "involution": 1e-9,
    },
    "integrator": {
        "method": "rk4",
        "step": 1e-3,
        "t_end": 1.0,
        "record_every": 1,
    },
    "factorization": {
        "expm_norm_bound": 700.0,
    },
    "random": {
        "seed": 0,
        "samples": 50,
    },
    "report": {
        "precision": 15,
    },
}


def load_config(config_path: Path | str | None = None) -> dict[str, Any]:
    """Load configuration from YAML file and merge with defaults.

    Args:
        config_path: Path to YAML configuration file. If None, uses defaults.

    Returns:
        Complete configuration dictionary with defaults merged.

    Raises:
        FileNotFoundError: If config_path is specified but doesn't exist.
        yaml.YAMLError: If config file has invalid YAML syntax.
    """
    config = copy.deepcopy(DEFAULT_CONFIG)

    if config_path is None:
        return config

    path = Path(config_path)
    if not path.exists():
        raise FileNotFoundError(f"Configuration file not found: {config_path}")

    try:
        with open(path, "r", encoding="utf-8") as f:
            user_config = yaml.safe_load(f) or {}
    except yaml.YAMLError as e:
        raise yaml.YAMLError(f"Invalid YAML in config file: {e}") from e

    config = _deep_merge(config, user_config)
    _validate_config(config)

    logger.info(f"Loaded configuration from {path}")
    return config


def _deep_merge(base: dict[str, Any], update: dict[str, Any]) -> dict[str, Any]:
    """Deep merge two dictionaries.

    Args:
        base: Base dictionary
        update: Dictionary with updates to merge

    Returns:
        Merged dictionary
    """
    result = base.copy()

    for key, value in update.items():
        if key in result and isinstance(result[key], dict) and isinstance(value, dict):
            result[key] = _deep_merge(result[key], value)
        else:
            result[key] = value

    return result


def _validate_config(config: dict[str, Any]) -> None:
    """Validate configuration structure and values.

    Args:
        config: Configuration dictionary to validate

    Raises:
        ValueError: If configuration is invalid
    """
    tolerances = config.get("tolerances", {})
    for key, value in tolerances.items():
        if not isinstance(value, (int, float)) or value <= 0:
            raise ValueError(f"Invalid tolerance {key}: {value}. Must be positive number")

    integrator = config.get("integrator", {})
    method = integrator.get("method")
    if method != "rk4":
        raise ValueError(f"Invalid integrator.method: {method}. Must be 'rk4'")

    step = integrator.get("step")
    if not isinstance(step, (int, float)) or step <= 0:
        raise ValueError(f"Invalid integrator.step: {step}. Must be positive number")

    t_end = integrator.get("t_end")
    if not isinstance(t_end, (int, float)) or t_end < 0:
        raise ValueError(f"Invalid integrator.t_end: {t_end}. Must be non-negative number")

    record_every = integrator.get("record_every")
    if not isinstance(record_every, int) or record_every < 1:
        raise ValueError(f"Invalid integrator.record_every: {record_every}. Must be positive integer")

    bound = config.get("factorization", {}).get("expm_norm_bound")
    if not isinstance(bound, (int, float)) or bound <= 0:
        raise ValueError(f"Invalid factorization.expm_norm_bound: {bound}. Must be positive number")

    samples = config.get("random", {}).get("samples")
    if not isinstance(samples, int) or samples < 1:
        raise ValueError(f"Invalid random.samples: {samples}. Must be positive integer")

    seed = config.get("random", {}).get("seed")
    if not isinstance(seed, int) or seed < 0:
        raise ValueError(f"Invalid random.seed: {seed}. Must be non-negative integer")


def apply_tolerance_override(
    config: dict[str, Any], env: Mapping[str, str] | None = None
) -> dict[str, Any]:
    """Scale every tolerance by the RMATRIX_TOL_OVERRIDE multiplier.

    Args:
        config: Configuration dictionary (not modified)
        env: Environment mapping, defaults to os.environ

    Returns:
        Configuration with scaled tolerances

    Raises:
        ValueError: If the multiplier is not a positive number
    """
    env = os.environ if env is None else env
    raw = env.get(TOLERANCE_ENV_VAR)
    if raw is None or raw.strip() == "":
        return config

    try:
        factor = float(raw)
    except ValueError as e:
        raise ValueError(f"Invalid {TOLERANCE_ENV_VAR}: {raw!r}. Must be a number") from e
    if not factor > 0:
        raise ValueError(f"Invalid {TOLERANCE_ENV_VAR}: {raw!r}. Must be positive")

    result = copy.deepcopy(config)
    result["tolerances"] = {
        key: value * factor for key, value in config.get("tolerances", {}).items()
    }
    logger.info(f"Tolerances scaled by {factor} ({TOLERANCE_ENV_VAR})")
    return result


def tolerance(config: dict[str, Any] | None, key: str) -> float:
    """Look up a tolerance, falling back to the default ledger."""
    if config is not None:
        value = config.get("tolerances", {}).get(key)
        if value is not None:
            return float(value)
    return float(DEFAULT_CONFIG["tolerances"][key])


def save_default_config(output_path: Path | str) -> None:
    """Save the default configuration to a YAML file.

    Args:
        output_path: Path where to save the default config
    """
    path = Path(output_path)

    with open(path, "w", encoding="utf-8") as f:
        yaml.dump(DEFAULT_CONFIG, f, default_flow_style=False, sort_keys=False)
