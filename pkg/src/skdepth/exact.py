"""Exact halfspace depth in the plane and exact beta-skeleton depth in any dimension."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from .geometry import (
    ArrayLike,
    GeometryError,
    PointSet,
    as_point,
    as_points,
    check_beta,
    is_inf_beta,
    nonzero_pair_count,
)

HALFSPACE = "halfspace"
BETA_SKELETON = "beta_skeleton"


@dataclass(frozen=True)
class DepthResult:
    """A normalised depth value together with the count it came from.

    ``raw_count`` is an ``int`` for exact methods and a ``float`` for sampled
    approximations. ``beta`` is ``None`` for halfspace depth.
    """

    value: float
    raw_count: Union[int, float]
    normalizer: int
    kind: str
    beta: Optional[float] = None


def halfspace_depth_2d(q: ArrayLike, S: Union[ArrayLike, PointSet]) -> DepthResult:
    """Planar halfspace (Tukey) depth by an angular sweep around ``q``.

    Returns ``min(2*m/n, 1)`` where ``m`` is the smallest number of points of
    ``S`` in a closed halfplane whose boundary passes through ``q``.

    Points are translated so that ``q`` is the origin. Points coincident with
    ``q`` lie in every such halfplane. Every other point is reflected through
    the origin into the upper half-plane (angle in ``[0, pi)``), remembering
    whether it was flipped. For a boundary line of direction ``psi`` that
    passes through no data point, the left side holds the unflipped points
    with angle above ``psi`` and the flipped points with angle below it, so
    one pass over the sorted angle groups yields every candidate count.
    """
    q = as_point(q)
    pts = as_points(S)
    n = pts.shape[0]
    if n == 0:
        raise GeometryError("halfspace depth of an empty set is undefined")
    if pts.shape[1] != 2 or q.shape[0] != 2:
        raise GeometryError("halfspace_depth_2d requires planar points")

    rel = pts - q
    on_q = (rel[:, 0] == 0.0) & (rel[:, 1] == 0.0)
    z = int(np.count_nonzero(on_q))
    rel = rel[~on_q]
    if rel.shape[0] == 0:
        raw = z
    else:
        x, y = rel[:, 0], rel[:, 1]
        flipped = (y < 0.0) | ((y == 0.0) & (x < 0.0))
        fx = np.where(flipped, -x, x)
        fy = np.where(flipped, -y, y)
        # + 0.0 folds a possible -0.0 into 0.0
        angle = np.arctan2(fy, fx) + 0.0
        _, group = np.unique(angle, return_inverse=True)
        n_groups = int(group.max()) + 1
        up = np.bincount(group[~flipped], minlength=n_groups)
        down = np.bincount(group[flipped], minlength=n_groups)
        up_before = np.concatenate(([0], np.cumsum(up)))
        down_before = np.concatenate(([0], np.cumsum(down)))
        n_up, n_down = up_before[-1], down_before[-1]
        left = (n_up - up_before) + down_before
        right = up_before + (n_down - down_before)
        raw = z + int(min(left.min(), right.min()))

    value = min(2.0 * raw / n, 1.0)
    return DepthResult(value, raw, n, HALFSPACE)


class BetaSkeletonDepth:
    """Beta-skeleton depth evaluator with the pair geometry precomputed.

    Building costs ``O(d n^2)`` memory once; each query is then a vectorised
    ``O(d n^2)`` pass. Pairs of coincident data points are dropped, so they
    count neither in the numerator nor in the normaliser. A query equal to a
    data point is counted in every pair having that point as an endpoint,
    without going through the rounded boundary test.

    >>> ev = BetaSkeletonDepth([[-1, 0], [1, 0]], beta=1)
    >>> ev.depth([0, 0]).value
    1.0
    """

    def __init__(self, S: Union[ArrayLike, PointSet], beta: float, chunk_size: int = 1 << 20):
        pts = as_points(S)
        n = pts.shape[0]
        if n < 2:
            raise GeometryError("beta-skeleton depth needs at least two data points")
        self.beta = check_beta(beta)
        self.points = pts
        self.chunk_size = chunk_size
        i, j = np.triu_indices(n, k=1)
        keep = np.any(pts[i] != pts[j], axis=1)
        i, j = i[keep], j[keep]
        self.normalizer = nonzero_pair_count(pts)
        assert self.normalizer == i.size
        self._i, self._j = i, j
        x_i, x_j = pts[i], pts[j]
        if is_inf_beta(self.beta):
            self._x_i, self._x_j = x_i, x_j
            self._u = x_j - x_i
        else:
            half = self.beta / 2.0
            self._c_i = half * x_i + (1.0 - half) * x_j
            self._c_j = (1.0 - half) * x_i + half * x_j
            diff = x_i - x_j
            self._r2 = half * half * np.einsum("ij,ij->i", diff, diff)

    def _count(self, q: np.ndarray) -> int:
        total = 0
        m = self.normalizer
        hits = np.flatnonzero(np.all(self.points == q, axis=1))
        hits = hits if hits.size else None
        for lo in range(0, m, self.chunk_size):
            hi = min(lo + self.chunk_size, m)
            if is_inf_beta(self.beta):
                u = self._u[lo:hi]
                inside = (np.einsum("ij,ij->i", u, q - self._x_i[lo:hi]) >= 0.0) & (
                    np.einsum("ij,ij->i", -u, q - self._x_j[lo:hi]) >= 0.0
                )
            else:
                d_i = q - self._c_i[lo:hi]
                d_j = q - self._c_j[lo:hi]
                far = np.maximum(np.einsum("ij,ij->i", d_i, d_i), np.einsum("ij,ij->i", d_j, d_j))
                inside = far <= self._r2[lo:hi]
            if hits is not None:
                inside |= np.isin(self._i[lo:hi], hits) | np.isin(self._j[lo:hi], hits)
            total += int(np.count_nonzero(inside))
        return total

    def depth(self, q: ArrayLike) -> DepthResult:
        q = as_point(q)
        if q.shape[0] != self.points.shape[1]:
            raise GeometryError("query dimension does not match the data")
        raw = self._count(q)
        value = raw / self.normalizer if self.normalizer else 0.0
        return DepthResult(value, raw, self.normalizer, BETA_SKELETON, self.beta)

    def depths(self, Q: Union[ArrayLike, PointSet]) -> list:
        return [self.depth(q) for q in as_points(Q)]


def beta_skeleton_depth(q: ArrayLike, S: Union[ArrayLike, PointSet], beta: float) -> DepthResult:
    """Fraction of influence regions S_beta(x_i, x_j), i < j, containing ``q``."""
    return BetaSkeletonDepth(S, beta).depth(q)
