import os
from typing import Any, Dict, List, Optional

import yaml
from dotenv import load_dotenv
from pydantic import BaseModel, Field

from holonomy.rings.fields import default_primes

PRIMES_ENV = "HOLONOMY_PRIMES"
CACHE_ENV = "HOLONOMY_CACHE_DIR"


class FitSettings(BaseModel):
    margin: int = Field(10, ge=0, description="Rows demanded beyond the unknown count")
    exact_limit: int = Field(48, ge=1, description="Largest rational system solved without primes")
    max_primes: int = Field(12, ge=2, description="Prime budget of a lifted fit")


class NumericSettings(BaseModel):
    dps: int = Field(40, ge=15, description="mpmath working precision")
    theta_tolerance: float = 1e-8
    quadrature_tolerance: float = 1e-7
    ode_tolerance: float = 1e-6
    flatness_tolerance: float = 1e-3


def _expand(value: Any) -> Any:
    if isinstance(value, str):
        expanded = os.path.expandvars(value)
        return None if expanded.startswith("${") else expanded
    if isinstance(value, dict):
        return {k: _expand(v) for k, v in value.items()}
    if isinstance(value, list):
        return [_expand(v) for v in value]
    return value


def load_config(config_path: str = "config.yaml") -> Dict[str, Any]:
    """
    Load configuration from YAML file, with ${VAR} expanded from the environment.

    Args:
        config_path (str): Path to the configuration file

    Returns:
        dict: Configuration dictionary; empty when the file does not exist.
    """
    load_dotenv()
    if not os.path.exists(config_path):
        return {}

    with open(config_path, "r") as file:
        config = yaml.safe_load(file) or {}

    return _expand(config)


def get_fit_config(config_path: str = "config.yaml") -> FitSettings:
    return FitSettings(**load_config(config_path).get("fit", {}))


def get_numeric_config(config_path: str = "config.yaml") -> NumericSettings:
    return NumericSettings(**load_config(config_path).get("numeric", {}))


def get_primes(config_path: str = "config.yaml") -> List[int]:
    """
    Prime list for modular work: $HOLONOMY_PRIMES (comma separated) when set,
    else the configured head padded with primes below 2^31.
    """
    override = os.environ.get(PRIMES_ENV)
    if override:
        return [int(p) for p in override.split(",") if p.strip()]
    section = load_config(config_path).get("primes", {})
    head = section.get("head") or [27449, 32749]
    return default_primes(int(section.get("count", 12)), head)


def get_cache_dir(config_path: str = "config.yaml") -> Optional[str]:
    """$HOLONOMY_CACHE_DIR, then the configured cache directory."""
    return os.environ.get(CACHE_ENV) or load_config(config_path).get("cache", {}).get("directory") or None


def get_log_level(config_path: str = "config.yaml") -> str:
    return str(load_config(config_path).get("logging", {}).get("level", "WARNING"))


def get_suite_orders(config_path: str = "config.yaml") -> Dict[str, int]:
    return {k: int(v) for k, v in load_config(config_path).get("suites", {}).items()}
