"""Vectorial functions over GF(2^n) with the maximal number of bent components.

Finite-field arithmetic, Walsh analysis, construction families and exhaustive checkers.
"""

from .boolfn import (Domain, TruthTable, WalshSpectrum, algebraic_degree, anf, derivative, dual, is_bent,
                     is_plateaued, naive_walsh, nonlinearity_bool, quadratic_rank, walsh_spectrum)
from .expr import ExprError, compile_source, parse, pretty
from .field import FieldElement, FieldError, FieldSpec, TowerSpec, dual_basis, make_field, make_tower
from .vecfn import (AnalysisReport, DiffSpectrum, VectorialFunction, analyze, component,
                    count_bent_components, differential_spectrum, nonbent_set, nonlinearity, walsh_value)

__version__ = "0.1.0"

__all__ = [
    "AnalysisReport", "DiffSpectrum", "Domain", "ExprError", "FieldElement", "FieldError", "FieldSpec",
    "TowerSpec", "TruthTable", "VectorialFunction", "WalshSpectrum", "algebraic_degree", "analyze", "anf",
    "compile_source", "component", "count_bent_components", "derivative", "differential_spectrum", "dual",
    "dual_basis", "is_bent", "is_plateaued", "make_field", "make_tower", "naive_walsh", "nonbent_set",
    "nonlinearity", "nonlinearity_bool", "parse", "pretty", "quadratic_rank", "walsh_spectrum", "walsh_value",
]
