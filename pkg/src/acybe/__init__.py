"""Exact computer algebra for the A-classical Yang-Baxter equation.

Series of type (n, lambda), their verification, the associated cobrackets,
classical doubles and Manin triples, and Stolin-pair constructions for
matrix algebras. Every coefficient is an exact rational or cyclotomic number.
"""
from .algebra import MetricAlgebra, casimir_gamma, check_gamma_invariance, matrix_algebra, named_algebra
from .cybe import StandardFormSeries, bar, cyb, gcyb, is_skew, verify
from .stolin import StolinPair, check_stolin_pair, quasi_rational_from_pair, rational_from_pair

__all__ = [
    "MetricAlgebra", "casimir_gamma", "check_gamma_invariance", "matrix_algebra", "named_algebra",
    "StandardFormSeries", "bar", "cyb", "gcyb", "is_skew", "verify",
    "StolinPair", "check_stolin_pair", "quasi_rational_from_pair", "rational_from_pair",
]
