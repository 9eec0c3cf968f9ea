"""Exact exponents, colour schemes, lemma checks and a seeded Monte Carlo
pipeline for a random-overlay K_t-free construction bounding the
Erdős–Rogers function f_{s,t} for s+2 <= t <= 2s-1.
"""
from .exponents import (
    ConstructionParams,
    ExponentSet,
    LogConstants,
    PairClass,
    Regularity,
    check_intro_system,
    classify_pair,
    exponent_table,
    exponents,
    validate_log_constants,
)
from .schemes import (
    Configuration,
    CoreResult,
    Scheme,
    blockwise_value,
    canonicalize,
    config_value,
    core,
    count_exponents,
    enumerate_schemes,
    induced_subconfiguration,
    local_value,
    scheme_value,
)

__all__ = [
    "ConstructionParams",
    "ExponentSet",
    "LogConstants",
    "PairClass",
    "Regularity",
    "check_intro_system",
    "classify_pair",
    "exponent_table",
    "exponents",
    "validate_log_constants",
    "Configuration",
    "CoreResult",
    "Scheme",
    "blockwise_value",
    "canonicalize",
    "config_value",
    "core",
    "count_exponents",
    "enumerate_schemes",
    "induced_subconfiguration",
    "local_value",
    "scheme_value",
]

__version__ = "0.1.0"
