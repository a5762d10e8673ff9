"""Exact weighted cone decompositions of simple polytopes and weighted
Euler-Maclaurin formulas, over Q and cyclotomic fields."""

from .exact import (
    CycloNumber,
    MultiPoly,
    TruncatedSeries,
    bernoulli_number,
    bernoulli_polynomial,
    cyclo,
    q_series,
    todd_series,
    twist_series,
)
from .polytope import (
    BUILTINS,
    Face,
    Polytope,
    build_polytope,
    builtin,
    cone_generators,
    load_polytope_json,
    polytope_to_json,
    smallest_face_containing,
)
from .decomposition import (
    brianchon_gram_terms,
    decomposition_terms,
    find_epsilon,
    in_paradan_region,
    lawrence_varchenko_terms,
    polarize,
    sample_points,
    verify_decomposition,
    weighted_indicator_cone,
    weighted_indicator_polytope,
)
from .lattice import (
    enumerate_lattice_points,
    gamma_boundary,
    gamma_group,
    lambda_value,
    smith_normal_form,
    weighted_lattice_sum,
    working_order,
)
from .em1d import (
    Spline1D,
    bspline,
    em_halfray,
    em_halfray_left,
    em_interval,
    em_line,
    em_regular_sector,
    em_sector_tensor,
    em_twisted_halfray,
    periodic_bernoulli,
    q_lambda,
    q_lambda_at_zero,
    root_of_unity,
)
from .empoly import (
    build_operator,
    dilated_integral,
    em_exact_polynomial_sum,
    em_main_term,
    em_variant_consistency,
)

__version__ = "0.1.0"
