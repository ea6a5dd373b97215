"""Families of vectorial functions with 2^n - 2^(n/2) bent components, and their checkers."""

from .binomial import (BinomialHit, SearchResult, binomial, binomial_witness, canonical_pair, count_N_set,
                       gauss_t, is_subfield_space, kernel_dimensions, explicit_a_check, explicit_a_witnesses,
                       linearized_roots, pair_in_class, profile_tag, root_dimension_d, search_binomials)
from .mm import (mm_base_dual, mm_completeness_test, mm_construct, mm_dual_check, mm_dual_formula,
                 mm_outside_witness, mm_params)
from .niho import (ReducedPolynomial, condition_A_check, diff_check, dual_check, dual_derivative_check, niho_base,
                   niho_dual, niho_general, niho_general_dual_formula, niho_k2, niho_k2_dual_formula,
                   niho_k2_valid, orthogonal_basis, orthogonal_set, rt_check, rt_component_nonlinearity,
                   rt_expected, search_niho_k2)
from .spec import KINDS, ConstructionSpec
from .trace import (EXPONENT_ROWS, ConstructionError, L_of_u, check_walsh_factorization, count_niho_roots,
                    h1_spectrum, is_degenerate_exponent, is_linear, is_permutation, linear_h_analysis,
                    monomial_h, niho_check, niho_exponent, permutation_shift, row_exponent,
                    row_magnitude_squared, three_valued_analysis, trace_perm, verify_walsh_factorization)

__all__ = [
    "BinomialHit",
    "ConstructionError",
    "ConstructionSpec",
    "KINDS",
    "L_of_u",
    "ReducedPolynomial",
    "SearchResult",
    "EXPONENT_ROWS",
    "binomial",
    "binomial_witness",
    "canonical_pair",
    "check_walsh_factorization",
    "condition_A_check",
    "count_N_set",
    "count_niho_roots",
    "diff_check",
    "dual_check",
    "gauss_t",
    "h1_spectrum",
    "is_degenerate_exponent",
    "is_linear",
    "is_permutation",
    "is_subfield_space",
    "kernel_dimensions",
    "explicit_a_check",
    "explicit_a_witnesses",
    "dual_derivative_check",
    "linear_h_analysis",
    "linearized_roots",
    "mm_base_dual",
    "mm_completeness_test",
    "mm_construct",
    "mm_dual_check",
    "mm_dual_formula",
    "mm_outside_witness",
    "mm_params",
    "monomial_h",
    "niho_base",
    "niho_check",
    "niho_dual",
    "niho_exponent",
    "niho_general",
    "niho_general_dual_formula",
    "niho_k2",
    "niho_k2_dual_formula",
    "niho_k2_valid",
    "orthogonal_basis",
    "orthogonal_set",
    "pair_in_class",
    "permutation_shift",
    "profile_tag",
    "root_dimension_d",
    "rt_check",
    "rt_component_nonlinearity",
    "rt_expected",
    "search_binomials",
    "search_niho_k2",
    "row_exponent",
    "row_magnitude_squared",
    "three_valued_analysis",
    "trace_perm",
    "verify_walsh_factorization",
]
