"""Exact Boettcher-coordinate coefficients at wild superattracting fixed points.

Computes the coefficient series of the Boettcher coordinates of z^d - c and
x^d + c x^(d+1) over Q and its Eisenstein extensions Q[pi]/(pi^m - p), and
checks their p-adic valuations against closed forms.
"""

from .analysis import (
    ConditionReport,
    RadiusReport,
    ValuationProfile,
    check_dominance,
    check_partition_inequality,
    classify,
    classify_condition,
    conjecture_params,
    conjugacy_report,
    e_term,
    inverse_valuation_report,
    isometry_check,
    limit_slope,
    predicted_vp,
    radius_report,
    subadditivity_check,
    verify_profile,
)
from .errors import (
    BoettcherError,
    DivergenceError,
    DomainError,
    HypothesisError,
    IntegrityError,
    ParameterError,
    ResourceError,
)
from .padic import INF, EisensteinNumber, canonical_decompose, vp_int, vp_rational
from .series import TruncatedSeries, compose_normalized, lagrange_invert
from .solver import (
    BoettcherParams,
    CoefficientTable,
    invert_table,
    make_params,
    partition_sum_coefficient,
    residual_check,
    solve,
    solve_a,
    solve_b,
    solve_t,
)

__version__ = "0.1.0"
