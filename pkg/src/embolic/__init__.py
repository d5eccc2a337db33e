"""Covering-trick nerve complexes on finite metric-measure spaces.

Good balls, their maximal disjoint packing, the doubled-ball cover, its
nerve, Betti numbers over a prime field, and the closed-form simplex-count
bounds relating them to volume and injectivity radius.
"""

from .bounds import (
    BoundReport,
    assemble_report,
    compute_theta,
    croke_estimate,
    explicit_constants,
    scale_bound_check,
    theorem13_bound,
    verify_theorem11,
)
from .estimator import CoveringNerve
from .goodballs import GoodBall, GoodBallParams, find_good_ball, find_good_balls, growth_ok, scale_index
from .homology import BettiProfile, FieldSpec, betti, betti_match, boundary_matrix
from .nerve import SimplicialComplex, build_nerve, simplex_counts
from .packing import (
    IntersectionTable,
    Packing,
    build_packing,
    counting_chain_check,
    five_ball_check,
    intersection_table,
)
from .space import (
    Ball,
    MetricMeasureSpace,
    ball,
    circle_space,
    disjoint_union,
    flat_torus_space,
    sphere2_space,
    validate,
)

__all__ = [
    "Ball", "BettiProfile", "BoundReport", "CoveringNerve", "FieldSpec", "GoodBall",
    "GoodBallParams", "IntersectionTable", "MetricMeasureSpace", "Packing",
    "SimplicialComplex", "assemble_report", "ball", "betti", "betti_match",
    "boundary_matrix", "build_nerve", "build_packing", "circle_space", "compute_theta",
    "counting_chain_check", "croke_estimate", "disjoint_union", "explicit_constants",
    "find_good_ball", "find_good_balls", "five_ball_check", "flat_torus_space", "growth_ok",
    "intersection_table", "scale_bound_check", "scale_index", "simplex_counts",
    "sphere2_space", "theorem13_bound", "validate", "verify_theorem11",
]
