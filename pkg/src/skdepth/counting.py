"""Exact and sampled range counters for halfplanes, disks and caps.

Ranges are vectorised: a :class:`Halfplane` or :class:`Disk` may hold a single
range (``normal`` of shape ``(2,)``) or a batch of ``k`` ranges (``(k, 2)``), and
membership then returns an array of shape ``(m,)`` or ``(k, m)`` over ``m``
points. :class:`Cap` is the conjunction of one disk and one halfplane.

The sampled counter draws a uniform sample without replacement and scales
sample counts by ``n/m``. For a range family of VC dimension ``nu`` a sample of

    m = ceil(C * (nu * ln(1/eps) + ln(1/delta)) / eps**2)

points is, with probability at least ``1 - delta``, an eps-approximation: every
range count is estimated within ``eps * n`` additively. ``C`` was calibrated
empirically (see ``SAMPLE_CONSTANT``) and ``nu`` is taken as 6, the sum of the
VC dimensions of planar disks and planar halfplanes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Union

import numpy as np

from .geometry import ArrayLike, PointSet, as_point, as_points

VC_DIMENSION = 6
# Calibrated by tools/calibrate_sample_constant.py: uniform data, n = 3000,
# 300 seeded trials at m in {200, 400}, beta in {1, 2, 3, inf}. The largest
# constant needed over eps in {0.05, 0.1, 0.2} x delta in {0.01, 0.05, 0.1}
# for the worst per-range error to stay within eps*n was 0.255.
SAMPLE_CONSTANT = 0.3

EXACT = "exact"
SAMPLED = "sampled"


class CountingError(ValueError):
    pass


def dot2(u: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Broadcast planar dot product.

    Written as two products and one sum so every element is evaluated by the
    same float operations whatever the batch shape (BLAS may fuse them).
    """
    return u[..., 0] * v[..., 0] + u[..., 1] * v[..., 1]


@dataclass(frozen=True)
class Halfplane:
    """``{p : normal . p <= offset}``, or ``<`` when ``closed`` is false.

    ``contains`` accepts ``(m, 2)`` points, giving ``(m,)`` or ``(k, m)``
    results, or ``(k, 1, 2)`` points to test range ``i`` on point ``i`` only.
    """

    normal: np.ndarray
    offset: Union[float, np.ndarray]
    closed: bool = True

    def contains(self, points: np.ndarray) -> np.ndarray:
        proj = dot2(np.asarray(self.normal, dtype=float)[..., None, :], points)
        off = np.asarray(self.offset, dtype=float)[..., None]
        return proj <= off if self.closed else proj < off


@dataclass(frozen=True)
class Disk:
    """Disk with centre ``center`` and squared radius ``radius_sq``.

    Membership is decided on the power ``|p|^2 - 2 c.p + (|c|^2 - r^2)``; for
    disks through the origin the constant term is exactly zero, which keeps the
    test accurate when the centre is far from the points.
    """

    center: np.ndarray
    radius_sq: Union[float, np.ndarray]
    closed: bool = True

    @property
    def radius(self):
        return np.sqrt(self.radius_sq)

    def power(self, points: np.ndarray) -> np.ndarray:
        c = np.asarray(self.center, dtype=float)
        const = dot2(c, c) - np.asarray(self.radius_sq, dtype=float)
        return dot2(points, points) - 2.0 * dot2(c[..., None, :], points) + const[..., None]

    def contains(self, points: np.ndarray) -> np.ndarray:
        pw = self.power(points)
        return pw <= 0.0 if self.closed else pw < 0.0


@dataclass(frozen=True)
class Cap:
    """Circular cap: the part of ``disk`` inside ``halfplane``."""

    disk: Disk
    halfplane: Halfplane

    def contains(self, points: np.ndarray) -> np.ndarray:
        return self.disk.contains(points) & self.halfplane.contains(points)


Range = Union[Halfplane, Disk, Cap]


def sample_size(epsilon: float, delta: float, nu: int = VC_DIMENSION, constant: float = SAMPLE_CONSTANT) -> int:
    """Sample size for an additive ``epsilon`` approximation with confidence ``1 - delta``."""
    _check_unit("epsilon", epsilon)
    _check_unit("delta", delta)
    return math.ceil(constant * (nu * math.log(1.0 / epsilon) + math.log(1.0 / delta)) / epsilon**2)


def _check_unit(name: str, value) -> None:
    if value is None or not (0.0 < float(value) < 1.0):
        raise CountingError(f"{name} must lie in (0, 1), got {value!r}")


@dataclass(frozen=True)
class RangeCounter:
    """Immutable range counter over a planar point set.

    ``points`` is the whole set in exact mode and the drawn sample otherwise;
    every count is ``scale`` times the number of ``points`` in the range.
    ``fallback`` is set when sampled mode was requested but the required
    sample would not be smaller than the data set.
    """

    mode: str
    base_size: int
    points: np.ndarray
    scale: float = 1.0
    epsilon: Optional[float] = None
    delta: Optional[float] = None
    seed: Optional[int] = None
    requested_mode: str = EXACT
    fallback: bool = False
    meta: dict = field(default_factory=dict)

    @property
    def sample_size(self) -> int:
        return self.points.shape[0]

    def count(self, rng: Range, origin: Optional[ArrayLike] = None):
        """Scaled number of points inside ``rng``.

        With ``origin`` the range is read in coordinates centred at ``origin``,
        i.e. a point ``p`` is tested as ``p - origin``. Batched ranges return an
        array of counts.
        """
        pts = self.points if origin is None else self.points - as_point(origin)
        hits = np.count_nonzero(rng.contains(pts), axis=-1)
        if self.mode == EXACT:
            return hits if np.ndim(hits) else int(hits)
        return hits * self.scale if np.ndim(hits) else float(hits) * self.scale


def build(
    S: Union[ArrayLike, PointSet],
    mode: str = EXACT,
    epsilon: Optional[float] = None,
    delta: Optional[float] = None,
    seed: Optional[int] = None,
) -> RangeCounter:
    """Preprocess ``S`` into a range counter.

    >>> c = build([[1, 0], [-1, 0], [0, 0]])
    >>> c.count(Halfplane(np.array([-1.0, 0.0]), 0.0))
    2
    """
    pts = as_points(S)
    n = pts.shape[0]
    if pts.shape[1] != 2:
        raise CountingError("range counters are planar")
    if mode == EXACT:
        return RangeCounter(EXACT, n, pts, 1.0, epsilon, delta, seed, EXACT)
    if mode != SAMPLED:
        raise CountingError(f"unknown counter mode {mode!r}")
    if seed is None:
        raise CountingError("sampled mode requires a seed")
    m = sample_size(epsilon, delta)
    meta = {"required_sample_size": m}
    if m >= n:
        return RangeCounter(EXACT, n, pts, 1.0, epsilon, delta, seed, SAMPLED, True, meta)
    rng = np.random.default_rng(seed)
    idx = np.sort(rng.choice(n, size=m, replace=False))
    return RangeCounter(SAMPLED, n, pts[idx], n / m, epsilon, delta, seed, SAMPLED, False, meta)


def count(counter: RangeCounter, rng: Range, origin: Optional[ArrayLike] = None):
    return counter.count(rng, origin)
