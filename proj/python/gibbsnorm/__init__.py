"""Normalizability criteria and Monte Carlo tools for Wick-ordered Gibbs measures."""

from ._gibbsnorm import (
    ConfigError,
    InconsistencyError,
    check_taming,
    classify,
    estimate_z,
    hermite,
    sigma_alpha_N,
    wick_value,
)

__all__ = [
    "ConfigError",
    "InconsistencyError",
    "check_taming",
    "classify",
    "estimate_z",
    "hermite",
    "sigma_alpha_N",
    "wick_value",
]
__version__ = "0.1.0"
