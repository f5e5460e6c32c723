"""Kaprekar's routine in arbitrary bases: exact orbit analysis and closed forms."""

from kaprekar.digits import DigitVector, DomainError, from_digits, is_repdigit, kaprekar_map, to_digits
from kaprekar.orbits import (
    FunctionMap,
    KaprekarMap,
    OrbitReport,
    SystemReport,
    analyze_orbit,
    exhaustive_analysis,
    iterate,
)

__version__ = "0.1.0"

__all__ = [
    "DigitVector",
    "DomainError",
    "FunctionMap",
    "KaprekarMap",
    "OrbitReport",
    "SystemReport",
    "analyze_orbit",
    "exhaustive_analysis",
    "from_digits",
    "is_repdigit",
    "iterate",
    "kaprekar_map",
    "to_digits",
]
