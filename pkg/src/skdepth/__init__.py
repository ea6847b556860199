"""Halfspace and beta-skeleton depth: exact computation, range-counting
reduction with sampled approximation, and depth-dissimilarity measures."""

from .analysis import (
    DepthVector,
    FitReport,
    convergence_table,
    d_c,
    d_c_depths,
    d_E,
    depth_poset,
    fit_polynomial,
    select_degree,
)
from .counting import Cap, Disk, Halfplane, RangeCounter
from .counting import build as build_counter
from .exact import BetaSkeletonDepth, DepthResult, beta_skeleton_depth, halfspace_depth_2d
from .geometry import BETA_INF, GeometryError, InfluenceRegion, PointSet, contains, influence_region, lens_area
from .reduction import approx_beta_skeleton_depth, build_ranges, depth_via_counts, membership_via_reduction

__version__ = "0.1.0"
