"""Exact q-series characters of sl(n+1)^ standard modules and their parafermionic spaces."""

from .fermionic import HighestWeight, parafermionic_sum, principal_sum, prop01_sum
from .lattice import WeightVec
from .oracle import DominantWeight, freudenthal_table, parafermionic_trace, string_function
from .qseries import QSeries, equal_to_order
from .theta import assemble_character, theta_series

__all__ = [
    "DominantWeight",
    "HighestWeight",
    "QSeries",
    "WeightVec",
    "assemble_character",
    "equal_to_order",
    "freudenthal_table",
    "parafermionic_sum",
    "parafermionic_trace",
    "prop01_sum",
    "principal_sum",
    "string_function",
    "theta_series",
]
