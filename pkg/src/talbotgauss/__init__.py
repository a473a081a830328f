"""Quadratic Gauss sums, Talbot carpets, superoscillations and periodic Schrodinger evolution."""

from .gauss_arith import GaussSumResult, GaussSumSpec, gauss_sum, gauss_sum_direct
from .potential import PeriodicPotential
from .testfunctions import builtin_test_function

__version__ = "0.1.0"

__all__ = [
    "GaussSumResult", "GaussSumSpec", "PeriodicPotential", "builtin_test_function",
    "gauss_sum", "gauss_sum_direct",
]
