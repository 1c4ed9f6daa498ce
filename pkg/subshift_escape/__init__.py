"""
Subshift Escape Rates Package

Escape rates of the shift map on full shifts and subshifts of finite type
into Markov holes, computed from correlation polynomials and certified
Perron roots, plus table reproduction and theorem verification suites.
"""

__version__ = "1.0.0"
__author__ = "Anand"

from .errors import EscapeRateError
from .escape import (
    ComparisonResult,
    EscapeRateResult,
    HoleSpec,
    Ordering,
    compare_escape,
    cylinder_measure,
    d_instance,
    d_threshold,
    escape_rate,
    extremal_words,
    parry_data,
)
from .poly import IntPolynomial, RationalFunction, correlation_data, generating_function, r_function
from .spectral import PerronResult, perron_root, topological_entropy
from .words import Word, WordCollection, WordMode, correlation, minimal_period_hole, parse_collection, parse_word

__all__ = [
    "ComparisonResult",
    "EscapeRateError",
    "EscapeRateResult",
    "HoleSpec",
    "IntPolynomial",
    "Ordering",
    "PerronResult",
    "RationalFunction",
    "Word",
    "WordCollection",
    "WordMode",
    "compare_escape",
    "correlation",
    "correlation_data",
    "cylinder_measure",
    "d_instance",
    "d_threshold",
    "escape_rate",
    "extremal_words",
    "generating_function",
    "minimal_period_hole",
    "parry_data",
    "parse_collection",
    "parse_word",
    "perron_root",
    "r_function",
    "topological_entropy",
]
