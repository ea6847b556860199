"""Geometric primitives and the beta-skeleton influence region.

The influence region of a pair (x_i, x_j) for ``beta >= 1`` is the intersection
of two closed balls of radius ``(beta/2)*|x_i - x_j|`` centred at

    c_i = (beta/2) x_i + (1 - beta/2) x_j
    c_j = (1 - beta/2) x_i + (beta/2) x_j

``beta = 1`` gives the ball with diameter x_i x_j, ``beta = 2`` the lens, and
``beta = inf`` the slab bounded by the two hyperplanes through x_i and x_j
orthogonal to the segment. Infinity is never substituted into the ball
formulas; it is dispatched to the slab branch instead.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence, Union

import numpy as np

BETA_INF = math.inf
# beta at which the reduction halfplane passes through the disk centre
BETA_REGIME_THRESHOLD = 2.0 + math.sqrt(2.0)

ArrayLike = Union[Sequence[float], Sequence[Sequence[float]], np.ndarray]


class GeometryError(ValueError):
    """Invalid geometric input (coincident points, bad beta, bad shapes)."""


def check_beta(beta: float) -> float:
    """Validate a beta parameter and return it as a float.

    Any real ``beta >= 1`` is accepted, as is ``math.inf``.
    """
    try:
        beta = float(beta)
    except (TypeError, ValueError):
        raise GeometryError(f"beta must be a real number >= 1, got {beta!r}") from None
    if math.isnan(beta) or beta < 1.0:
        raise GeometryError(f"beta must be >= 1, got {beta}")
    return beta


def is_inf_beta(beta: float) -> bool:
    return math.isinf(beta)


def as_point(p: ArrayLike) -> np.ndarray:
    arr = np.asarray(p, dtype=float)
    if arr.ndim != 1 or arr.size == 0:
        raise GeometryError(f"a point must be a non-empty 1-d coordinate list, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise GeometryError("point coordinates must be finite")
    return arr


def as_points(points: Union[ArrayLike, "PointSet"]) -> np.ndarray:
    """Coerce ``points`` to an ``(n, d)`` float array of finite coordinates."""
    if isinstance(points, PointSet):
        return points.points
    arr = np.asarray(points, dtype=float)
    if arr.ndim == 1 and arr.size == 0:
        arr = arr.reshape(0, 2)
    if arr.ndim != 2:
        raise GeometryError(f"point set must be a 2-d array of shape (n, d), got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise GeometryError("point coordinates must be finite")
    return arr


@dataclass(frozen=True)
class PointSet:
    """An ordered set of d-dimensional points plus optional generation seed."""

    points: np.ndarray
    seed: Optional[int] = None

    def __post_init__(self):
        object.__setattr__(self, "points", as_points(self.points))

    def __len__(self) -> int:
        return self.points.shape[0]

    @property
    def dim(self) -> int:
        return self.points.shape[1]

    @classmethod
    def uniform(cls, n: int, bbox=(-10.0, 10.0, -10.0, 10.0), seed: Optional[int] = None) -> "PointSet":
        """Draw ``n`` planar points uniformly from ``bbox = (xmin, xmax, ymin, ymax)``."""
        return cls(uniform_points(n, bbox, np.random.default_rng(seed)), seed)


def uniform_points(n: int, bbox, rng: np.random.Generator) -> np.ndarray:
    xmin, xmax, ymin, ymax = (float(v) for v in bbox)
    if not (xmin < xmax and ymin < ymax):
        raise GeometryError(f"degenerate bounding box {bbox}")
    return np.column_stack([rng.uniform(xmin, xmax, n), rng.uniform(ymin, ymax, n)])


@dataclass(frozen=True)
class InfluenceRegion:
    """Influence region S_beta(x_i, x_j).

    For finite beta the region is ``B(center_i, radius) & B(center_j, radius)``.
    For ``beta = inf`` the centres and radius are ``None`` and the region is the
    slab between the hyperplanes through ``x_i`` and ``x_j``.
    """

    beta: float
    x_i: np.ndarray
    x_j: np.ndarray
    center_i: Optional[np.ndarray]
    center_j: Optional[np.ndarray]
    radius: Optional[float]

    @property
    def is_slab(self) -> bool:
        return self.center_i is None


def influence_region(x_i: ArrayLike, x_j: ArrayLike, beta: float) -> InfluenceRegion:
    x_i, x_j = as_point(x_i), as_point(x_j)
    if x_i.shape != x_j.shape:
        raise GeometryError("x_i and x_j must have the same dimension")
    if np.array_equal(x_i, x_j):
        raise GeometryError("influence region is undefined for coincident points")
    beta = check_beta(beta)
    if is_inf_beta(beta):
        return InfluenceRegion(beta, x_i, x_j, None, None, None)
    half = beta / 2.0
    c_i = half * x_i + (1.0 - half) * x_j
    c_j = (1.0 - half) * x_i + half * x_j
    r = half * float(np.linalg.norm(x_i - x_j))
    return InfluenceRegion(beta, x_i, x_j, c_i, c_j, r)


def contains(region: InfluenceRegion, q: ArrayLike) -> bool:
    """Closed membership test ``q in S_beta(x_i, x_j)``."""
    q = as_point(q)
    if q.shape != region.x_i.shape:
        raise GeometryError("query dimension does not match the region")
    # endpoints sit on the boundary, where rounding must not decide
    if np.array_equal(q, region.x_i) or np.array_equal(q, region.x_j):
        return True
    if region.is_slab:
        u = region.x_j - region.x_i
        return bool(np.dot(u, q - region.x_i) >= 0.0 and np.dot(-u, q - region.x_j) >= 0.0)
    # squared radius from the pair separation, matching the vectorised path
    half = region.beta / 2.0
    r2 = half * half * float(np.dot(region.x_i - region.x_j, region.x_i - region.x_j))
    d_i = q - region.center_i
    d_j = q - region.center_j
    return bool(max(np.dot(d_i, d_i), np.dot(d_j, d_j)) <= r2)


def lens_area(beta: float, length: float) -> float:
    """Area of the planar influence region of a pair at distance ``length``.

    The region is the union of two circular segments of the radius-``r`` circles,
    each with half-angle ``theta = arccos((beta - 1)/beta)``. With
    ``r = beta*l/2``, centre distance ``d = (beta - 1)*l`` and half-chord
    ``a = (l/2)*sqrt(2*beta - 1)`` the area is ``2*r**2*theta - d*a``.
    The factor 2 is required because ``theta`` is the half-angle; the
    single-segment form ``theta*r**2 - d*a`` underestimates the area.
    ``beta = 1`` reduces to the disk ``pi*l**2/4``.
    """
    beta = check_beta(beta)
    if length <= 0:
        raise GeometryError(f"pair distance must be positive, got {length}")
    if is_inf_beta(beta):
        return math.inf
    theta = math.acos((beta - 1.0) / beta)
    r = beta * length / 2.0
    d = (beta - 1.0) * length
    a = lens_half_height(beta, length)
    return 2.0 * r * r * theta - d * a


def lens_half_height(beta: float, length: float) -> float:
    """Half-width of the lens across the pair axis, ``(l/2)*sqrt(2*beta - 1)``."""
    beta = check_beta(beta)
    if is_inf_beta(beta):
        return math.inf
    return (length / 2.0) * math.sqrt(2.0 * beta - 1.0)


def lens_area_ratio(beta: float) -> float:
    """``A(beta)/A(beta + 1)``, independent of the pair distance."""
    return lens_area(beta, 1.0) / lens_area(beta + 1.0, 1.0)


def nonzero_pair_count(points: np.ndarray) -> int:
    """Number of unordered index pairs whose points are not coincident."""
    n = points.shape[0]
    if n < 2:
        return 0
    _, counts = np.unique(points, axis=0, return_counts=True)
    dup = int(np.sum(counts * (counts - 1) // 2))
    return n * (n - 1) // 2 - dup
