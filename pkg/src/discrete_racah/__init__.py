"""Exact discrete realization of the higher-rank Racah algebra R(n).

Racah polynomials, the difference operators L_j, the generators C_A on the
simplex grid, and checks of the algebra relations and orthogonality.
"""
from .algebra import GeneratorTable, LabelSet, all_label_sets
from .errors import (
    BoundaryError,
    DimensionError,
    GenericityError,
    PoleError,
    RacahError,
    RangeError,
    SignError,
    SpectrumMismatch,
    StructureError,
)
from .grid import SimplexGrid, racah_table
from .matrix import OperatorMatrix
from .operators import DifferenceOperator, build_racah_operator, realize
from .orthogonality import WeightValue, connection_matrix, weight_mu, weight_omega
from .polynomials import ParameterSet, hyp4f3_terminating, kappa, racah_multivariate, racah_univariate
from .scalar import format_rational, parse_rational, pochhammer
from .suites import SUITES, run_suite, run_suites

__version__ = "0.1.0"

__all__ = [
    "BoundaryError", "DifferenceOperator", "DimensionError", "GeneratorTable", "GenericityError",
    "LabelSet", "OperatorMatrix", "ParameterSet", "PoleError", "RacahError", "RangeError", "SUITES",
    "SignError", "SimplexGrid", "SpectrumMismatch", "StructureError", "WeightValue", "all_label_sets",
    "build_racah_operator", "connection_matrix", "format_rational", "hyp4f3_terminating", "kappa",
    "parse_rational", "pochhammer", "racah_multivariate", "racah_table", "racah_univariate", "realize",
    "run_suite", "run_suites", "weight_mu", "weight_omega",
]
