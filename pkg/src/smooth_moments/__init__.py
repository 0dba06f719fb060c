"""Smooth numbers, exponential sums over them, and their moments."""

from .arcs import ArcDecomposition, ArcLabel, arc_decompose, classify_theta, farey_fractions, optimal_Q
from .bounds import (
    BoundReport,
    compare,
    cor_energy_bound,
    corollary_consistency_check,
    harper_mvt_bound,
    sunit_bound,
    thm1_bound,
    thm2_bound,
    trivial_bound,
)
from .errors import (
    BoundViolation,
    CapacityError,
    ConvergenceError,
    DomainError,
    SmoothMomentsError,
    ValidityError,
)
from .expsum import ExpSumValue, eval_S, eval_S_grid, skeleton_baker, skeleton_ft, skeleton_harper
from .moments import (
    MomentResult,
    RepCounts,
    energy,
    even_moment_exact,
    moment_quadrature,
    moment_refined,
    representation_counts,
)
from .smooth_core import ExponentParams, SmoothSet, exponent_params, psi, saddle_alpha, sieve_smooth

__version__ = "0.1.0"

__all__ = [
    "arc_decompose",
    "ArcDecomposition",
    "ArcLabel",
    "BoundReport",
    "BoundViolation",
    "CapacityError",
    "classify_theta",
    "compare",
    "ConvergenceError",
    "cor_energy_bound",
    "corollary_consistency_check",
    "DomainError",
    "energy",
    "eval_S",
    "eval_S_grid",
    "even_moment_exact",
    "exponent_params",
    "ExponentParams",
    "ExpSumValue",
    "farey_fractions",
    "harper_mvt_bound",
    "moment_quadrature",
    "moment_refined",
    "MomentResult",
    "optimal_Q",
    "psi",
    "RepCounts",
    "representation_counts",
    "saddle_alpha",
    "sieve_smooth",
    "skeleton_baker",
    "skeleton_ft",
    "skeleton_harper",
    "SmoothMomentsError",
    "SmoothSet",
    "sunit_bound",
    "thm1_bound",
    "thm2_bound",
    "trivial_bound",
    "ValidityError",
]
