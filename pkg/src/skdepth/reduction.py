"""Planar beta-skeleton depth as a sum of per-point range counts.

Work in coordinates centred at the query ``q`` and write ``a = x_i - q``,
``b = x_j - q``. The origin lies in S_beta(x_i, x_j) exactly when

    (beta - 1)/beta >= max(a.b / |a|^2, a.b / |b|^2),

which for fixed ``a`` splits into a closed halfplane ``a.b <= ((beta-1)/beta)|a|^2``
and the complement of the open disk with centre ``k a``, ``k = beta/(2(beta-1))``,
passing through the origin. Counting, for every ``x_i``, the points ``b`` in
``halfplane minus open disk`` counts every qualifying pair twice.

How that set difference is decomposed into counts depends on ``beta``:

* ``beta = 1``: the halfplane ``a.b <= 0`` alone.
* ``1 < beta < 2 + sqrt(2)``: ``|H| - |B| + |rho|`` with ``rho`` the part of the
  disk beyond the halfplane.
* ``2 + sqrt(2) <= beta < inf``: ``|H| - |rho|`` with ``rho`` the part of the
  disk inside the halfplane.
* ``beta = inf``: ``|H| - |B|``; the disk (centre ``a/2``) lies inside ``H``.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from . import counting
from .counting import Cap, Disk, Halfplane, RangeCounter, dot2
from .exact import BETA_SKELETON, DepthResult
from .geometry import (
    BETA_REGIME_THRESHOLD,
    ArrayLike,
    GeometryError,
    PointSet,
    as_point,
    as_points,
    check_beta,
    is_inf_beta,
    nonzero_pair_count,
)

BETA_ONE = "beta_one"
LOW_BETA = "low_beta"
HIGH_BETA = "high_beta"
BETA_INF = "beta_inf"


def regime(beta: float) -> str:
    beta = check_beta(beta)
    if beta == 1.0:
        return BETA_ONE
    if is_inf_beta(beta):
        return BETA_INF
    return LOW_BETA if beta < BETA_REGIME_THRESHOLD else HIGH_BETA


@dataclass(frozen=True)
class RangeTriple:
    """Halfplane and disk attached to one data point (or a batch of them).

    The circular cap is not stored separately; it is the conjunction of
    ``disk`` with ``halfplane`` or with its open complement.
    """

    halfplane: Halfplane
    disk: Optional[Disk]
    regime: str
    beta: float

    def region_contains(self, points: np.ndarray) -> np.ndarray:
        """Closed halfplane minus open disk."""
        inside = self.halfplane.contains(points)
        if self.disk is not None:
            inside &= ~self.disk.contains(points)
        return inside


def _ranges(a: np.ndarray, beta: float) -> RangeTriple:
    """Ranges for translated point(s) ``a`` of shape ``(2,)`` or ``(k, 2)``."""
    mode = regime(beta)
    norm2 = dot2(a, a)
    if mode == BETA_ONE:
        return RangeTriple(Halfplane(a, np.zeros_like(norm2)), None, mode, beta)
    if mode == BETA_INF:
        center = a / 2.0
        return RangeTriple(Halfplane(a, norm2), Disk(center, dot2(center, center), closed=False), mode, beta)
    k = beta / (2.0 * (beta - 1.0))
    offset = ((beta - 1.0) / beta) * norm2
    center = k * a
    radius_sq = dot2(center, center)
    if __debug__:
        # the line bounding the halfplane meets the disk: d(c, line) <= r
        gap = np.abs(dot2(center, a) - offset) / np.sqrt(norm2)
        assert np.all(gap <= np.sqrt(radius_sq) * (1.0 + 1e-12)), "halfplane misses the reduction disk"
    return RangeTriple(Halfplane(a, offset), Disk(center, radius_sq, closed=False), mode, beta)


def build_ranges(x_i: ArrayLike, q: ArrayLike, beta: float) -> RangeTriple:
    """Halfplane and disk for data point ``x_i`` seen from query ``q``.

    >>> t = build_ranges([2, 0], [0, 0], 2)
    >>> float(t.halfplane.offset), t.disk.center.tolist(), float(t.disk.radius)
    (2.0, [2.0, 0.0], 2.0)
    """
    x_i, q = as_point(x_i), as_point(q)
    if x_i.shape != (2,) or q.shape != (2,):
        raise GeometryError("the range reduction is planar")
    if np.array_equal(x_i, q):
        raise GeometryError("x_i coincides with q; the translated point a = x_i - q is zero")
    return _ranges(x_i - q, check_beta(beta))


def membership_via_reduction(x_i: ArrayLike, x_j: ArrayLike, q: ArrayLike, beta: float) -> bool:
    """Whether ``q`` lies in S_beta(x_i, x_j), decided through the ranges of ``x_i``."""
    triple = build_ranges(x_i, q, beta)
    x_j = as_point(x_j)
    q = as_point(q)
    if np.array_equal(x_j, q):
        raise GeometryError("x_j coincides with q")
    return bool(triple.region_contains((x_j - q)[None, :])[0])


def regime_counts(triple: RangeTriple, counter: RangeCounter, origin=None, decomposition: Optional[str] = None):
    """Count ``halfplane minus open disk`` through the regime's decomposition.

    ``decomposition`` overrides the regime for finite ``beta > 1`` so the two
    decompositions can be compared; both are exact set identities.
    """
    mode = decomposition or triple.regime
    hp, disk = triple.halfplane, triple.disk
    n_h = counter.count(hp, origin)
    if mode == BETA_ONE:
        return n_h
    if disk is None:
        raise GeometryError(f"decomposition {mode!r} needs a disk")
    if mode == BETA_INF:
        return n_h - counter.count(disk, origin)
    if mode == LOW_BETA:
        beyond = Halfplane(-np.asarray(hp.normal), -np.asarray(hp.offset), closed=False)
        return n_h - counter.count(disk, origin) + counter.count(Cap(disk, beyond), origin)
    if mode == HIGH_BETA:
        return n_h - counter.count(Cap(disk, hp), origin)
    raise ValueError(f"unknown decomposition {mode!r}")


def _multiplicities(counter: RangeCounter, pts: np.ndarray) -> np.ndarray:
    table = counter.meta.get("_multiplicity")
    if table is None:
        uniq, cnt = np.unique(counter.points, axis=0, return_counts=True)
        table = {tuple(row): int(c) for row, c in zip(uniq.tolist(), cnt)}
        counter.meta["_multiplicity"] = table
    return np.array([table.get(tuple(row), 0) for row in pts.tolist()], dtype=float)


def depth_via_counts(
    q: ArrayLike,
    S: Union[ArrayLike, PointSet],
    beta: float,
    counter: Optional[RangeCounter] = None,
    decomposition: Optional[str] = None,
) -> DepthResult:
    """Planar beta-skeleton depth from range counts.

    ``counter`` must be built over ``S`` (any mode); ranges are built in
    ``q``-centred coordinates and the counter translates its points. With an
    exact counter the raw count equals the pairwise enumeration exactly.

    Points equal to ``q`` are left out of the counting: each forms a
    qualifying pair with every point not equal to ``q``, added in closed form.
    Each row also drops the copies of ``x_i`` (including itself) found among
    the counter's points, since coincident pairs have no influence region.
    """
    q = as_point(q)
    pts = as_points(S)
    beta = check_beta(beta)
    n = pts.shape[0]
    if n < 2:
        raise GeometryError("beta-skeleton depth needs at least two data points")
    if pts.shape[1] != 2 or q.shape != (2,):
        raise GeometryError("depth_via_counts is planar")
    if counter is None:
        counter = counting.build(pts)
    if counter.base_size != n:
        raise GeometryError("counter was built over a different point set")

    on_q = np.all(pts == q, axis=1)
    z = int(np.count_nonzero(on_q))
    others = pts[~on_q]
    normalizer = nonzero_pair_count(pts)
    if others.shape[0]:
        a = others - q
        triple = _ranges(a, beta)
        per_point = regime_counts(triple, counter, q, decomposition)
        # remove counter points identical to x_i, and counter points at q
        self_hits = triple.region_contains(a[:, None, :])[:, 0]
        zero_hits = triple.region_contains(np.zeros((1, 2)))[:, 0]
        mult = _multiplicities(counter, others)
        q_mult = _multiplicities(counter, q[None, :])[0]
        correction = counter.scale * (mult * self_hits + q_mult * zero_hits)
        total = np.sum(per_point) - np.sum(correction)
    else:
        total = 0

    if counter.mode == counting.EXACT:
        total = int(round(float(total)))
        half, odd = divmod(total, 2)
        if odd:
            warnings.warn("odd directional count; a pair sits on a range boundary within rounding", RuntimeWarning)
        raw = half + z * (n - z)
        value = raw / normalizer if normalizer else 0.0
    else:
        raw = float(total) / 2.0 + z * (n - z)
        value = min(max(raw / normalizer, 0.0), 1.0) if normalizer else 0.0
    return DepthResult(value, raw, normalizer, BETA_SKELETON, beta)


def approx_beta_skeleton_depth(
    q: ArrayLike,
    S: Union[ArrayLike, PointSet],
    beta: float,
    epsilon: float,
    delta: float,
    seed: int,
) -> DepthResult:
    """Beta-skeleton depth from a sampled counter.

    Each per-point count ``|H minus B|`` is one range estimate from the same
    sample, so with probability ``1 - delta`` it is off by at most
    ``epsilon * n``; halving the sum and dividing by ``n(n-1)/2`` keeps the
    depth within ``epsilon * n/(n-1)`` of the exact value.
    """
    counter = counting.build(S, counting.SAMPLED, epsilon, delta, seed)
    return depth_via_counts(q, S, beta, counter)


def depth_error_bound(epsilon: float, n: int) -> float:
    """Depth error bound ``2*eps*n/(n-1)`` for counters accurate to ``eps*n`` per range."""
    return 2.0 * epsilon * n / (n - 1)


__all__ = [
    "BETA_ONE",
    "LOW_BETA",
    "HIGH_BETA",
    "BETA_INF",
    "RangeTriple",
    "regime",
    "build_ranges",
    "membership_via_reduction",
    "regime_counts",
    "depth_via_counts",
    "approx_beta_skeleton_depth",
    "depth_error_bound",
]
