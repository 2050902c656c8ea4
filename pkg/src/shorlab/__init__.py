"""Shor's algorithm simulation lab with swap-cascade and power-of-two modexp builders."""

from .circuit import Circuit, Gate, GateKind
from .modexp import ExponentConvention, build_proposed, build_sota, effective_permutation
from .numtheory import FactorPair, FactoringCase, case_catalog, extract_factors, multiplicative_order
from .pipeline import Backend, FactoringResult, Method, ShorConfig, Status, build_shor_circuit, run_shor

__version__ = "0.1.0"

__all__ = [
    "Backend",
    "Circuit",
    "ExponentConvention",
    "FactorPair",
    "FactoringCase",
    "FactoringResult",
    "Gate",
    "GateKind",
    "Method",
    "ShorConfig",
    "Status",
    "build_proposed",
    "build_shor_circuit",
    "build_sota",
    "case_catalog",
    "effective_permutation",
    "extract_factors",
    "multiplicative_order",
    "run_shor",
]
