"""Greedy construction of sequences with small L2 discrepancy.

Dimension one runs in exact rational arithmetic; higher dimensions use a
float grid search.
"""

from .discrepancy import (
    BoxSpec,
    DiscrepancyKind,
    l2_extreme_sq,
    l2_periodic_sq,
    l2_prefix_curve,
    l2_sq,
    l2_sq_increment,
    l2_star_sq,
    l2_star_sq_sorted_1d,
    local_discrepancy,
    star_sup_1d,
    star_sup_prefix_curve,
)
from .greedy import (
    GreedyState,
    SearchConfig,
    SearchQualityError,
    greedy_nd,
    greedy_periodic_1d,
    greedy_star_1d,
    next_periodic_1d,
    next_star_1d,
)
from .numerics import Rational, make_rational, rat_cmp
from .sequences import (
    PointList,
    centered_grid,
    radical_inverse,
    read_points,
    symmetrized_vdc_prefix,
    van_der_corput_prefix,
    write_points,
)
from .verify import VerificationReport, run_suite

__version__ = "0.1.0"

__all__ = [
    "BoxSpec",
    "DiscrepancyKind",
    "GreedyState",
    "PointList",
    "Rational",
    "SearchConfig",
    "SearchQualityError",
    "VerificationReport",
    "centered_grid",
    "greedy_nd",
    "greedy_periodic_1d",
    "greedy_star_1d",
    "l2_extreme_sq",
    "l2_periodic_sq",
    "l2_prefix_curve",
    "l2_sq",
    "l2_sq_increment",
    "l2_star_sq",
    "l2_star_sq_sorted_1d",
    "local_discrepancy",
    "make_rational",
    "next_periodic_1d",
    "next_star_1d",
    "radical_inverse",
    "rat_cmp",
    "read_points",
    "run_suite",
    "star_sup_1d",
    "star_sup_prefix_curve",
    "symmetrized_vdc_prefix",
    "van_der_corput_prefix",
    "write_points",
]
