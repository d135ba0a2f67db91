"""Desk-scale verifier for difference-avoiding sets over F_q^n.

Builds witness polynomials supported on polynomial-map images, certifies
difference-matrix ranks, evaluates the closed-form density bounds, and
searches small spaces for extremal avoiding sets, with brute-force oracles
confirming each step on small fields.
"""

from .bounds import (BoundReport, bound_report, c_main, c_prime, digit_sum,
                     exact_tail, hoeffding_bound, monomial_count_at_most,
                     theorem_threshold)
from .errors import (ConstructionError, ContractError, FFSetsError,
                     FieldMismatchError, HypothesisError,
                     InternalConsistencyError, ResourceGuardError)
from .field import Field, field_from_q, format_field_spec, parse_field_spec
from .polyring import (NEG_DEGREE, Poly, UPoly, poly_from_text, poly_to_text,
                       reduce_exponent, univariate_pow_expand)
from .rankbound import (ClpSplit, DifferenceMatrix, PointSet, RankCertificate,
                        certify, clp_split, difference_matrix, rank_gf)
from .search import (AvoidanceInstance, SearchResult, enumerate_image,
                     greedy_avoiding, max_avoiding_exhaustive, verify_avoiding)
from .transform import (FunctionTable, analyze, kernel_orthogonality, sigma,
                        synthesize)
from .witness import (PolynomialMap, WitnessReport, build_witness,
                      check_coprimality, composed_map, fiber_counting_function,
                      kth_power_map)

__all__ = [
    "AvoidanceInstance", "BoundReport", "ClpSplit", "ConstructionError",
    "ContractError", "DifferenceMatrix", "FFSetsError", "Field",
    "FieldMismatchError", "FunctionTable", "HypothesisError",
    "InternalConsistencyError", "NEG_DEGREE", "PointSet", "Poly",
    "PolynomialMap", "RankCertificate", "ResourceGuardError", "SearchResult",
    "UPoly", "WitnessReport", "analyze", "bound_report", "build_witness",
    "c_main", "c_prime", "certify", "check_coprimality", "clp_split",
    "composed_map", "difference_matrix", "digit_sum", "enumerate_image",
    "exact_tail", "fiber_counting_function", "field_from_q",
    "format_field_spec", "greedy_avoiding", "hoeffding_bound",
    "kernel_orthogonality", "kth_power_map", "max_avoiding_exhaustive",
    "monomial_count_at_most", "parse_field_spec", "poly_from_text",
    "poly_to_text", "rank_gf", "reduce_exponent", "sigma", "synthesize",
    "theorem_threshold", "univariate_pow_expand", "verify_avoiding",
]

__version__ = "0.1.0"
