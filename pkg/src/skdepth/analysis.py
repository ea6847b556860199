"""Comparing depth functions: fitting dissimilarity, poset dissimilarity, convergence.

Two depth functions evaluated on the same query points give two vectors ``U``
and ``V``. The fitting dissimilarity is ``d_E = 1 - r^2`` for the least-squares
polynomial ``U ~ f(V)``. The poset dissimilarity ``d_c`` compares the orders
the two vectors induce on the queries, entry by entry.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Union

import numpy as np

from .exact import BetaSkeletonDepth
from .geometry import as_points, check_beta, is_inf_beta


@dataclass(frozen=True)
class DepthVector:
    """Depth values of a list of query points under one depth function."""

    values: np.ndarray
    labels: Optional[np.ndarray] = None
    kind: str = ""

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=float)
        if vals.ndim != 1 or not np.all(np.isfinite(vals)):
            raise ValueError("depth values must be a finite 1-d sequence")
        object.__setattr__(self, "values", vals)

    def __len__(self) -> int:
        return self.values.size


def _values(x) -> np.ndarray:
    if isinstance(x, DepthVector):
        return x.values
    vals = np.asarray(x, dtype=float)
    if vals.ndim != 1 or not np.all(np.isfinite(vals)):
        raise ValueError("depth values must be a finite 1-d sequence")
    return vals


# -- poset dissimilarity ---------------------------------------------------------


def depth_poset(values) -> np.ndarray:
    """Comparison matrix ``M[i, j] = 1`` iff ``values[i] <= values[j]``.

    >>> depth_poset([0.2, 0.1, 0.2]).tolist()
    [[1, 0, 1], [1, 1, 1], [1, 0, 1]]
    """
    v = _values(values)
    return (v[:, None] <= v[None, :]).astype(np.uint8)


def d_c(A: np.ndarray, B: np.ndarray, exact: bool = False) -> Union[float, Fraction]:
    """Share of off-diagonal entries on which two comparison matrices differ.

    With ``exact=True`` the value is returned as a ``Fraction``, so metric
    identities can be checked without float rounding.
    """
    A = np.asarray(A)
    B = np.asarray(B)
    if A.shape != B.shape or A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError(f"comparison matrices must be square and equal in shape, got {A.shape} and {B.shape}")
    n = A.shape[0]
    if n < 2:
        raise ValueError("d_c needs at least two elements")
    diff = int(np.abs(A.astype(np.int64) - B.astype(np.int64)).sum())
    if exact:
        return Fraction(diff, n * n - n)
    return diff / (n * n - n)


def d_c_depths(u, v) -> float:
    """``d_c`` between the chains induced by two depth vectors."""
    u, v = _values(u), _values(v)
    if u.size != v.size:
        raise ValueError("depth vectors differ in length")
    return d_c(depth_poset(u), depth_poset(v))


def tie_count(values) -> int:
    """Number of unordered pairs with equal depth."""
    _, counts = np.unique(_values(values), return_counts=True)
    return int(np.sum(counts * (counts - 1) // 2))


# -- fitting dissimilarity -------------------------------------------------------


@dataclass
class FitReport:
    """Least-squares polynomial ``U ~ f(V)`` and its goodness of fit.

    ``coefficients`` are ordered from the highest degree down. ``r_squared``
    is clamped to ``[0, 1]``; the unclamped value is kept in
    ``r_squared_raw`` and ``clamped`` records whether clamping changed it.
    """

    degree: int
    coefficients: List[float]
    residuals: np.ndarray
    deviations: np.ndarray
    r_squared: float
    r_squared_raw: float
    d_E: float
    clamped: bool = False

    def predict(self, x) -> np.ndarray:
        return np.polyval(self.coefficients, np.asarray(x, dtype=float))

    def residual_percentiles(self, qs: Sequence[float] = (5, 25, 50, 75, 95)) -> Dict[str, float]:
        abs_res = np.abs(self.residuals)
        return {f"p{int(p)}": float(np.percentile(abs_res, p)) for p in qs}

    def to_dict(self) -> dict:
        out = asdict(self)
        out.pop("residuals")
        out.pop("deviations")
        out["n"] = int(self.residuals.size)
        out["residual_percentiles"] = self.residual_percentiles()
        return out


def r_squared(U, fitted) -> float:
    """Unclamped coefficient of determination ``sum(xi^2 - delta^2) / sum(xi^2)``."""
    u = _values(U)
    xi = u - u.mean()
    delta = u - np.asarray(fitted, dtype=float)
    ss_tot = float(np.dot(xi, xi))
    ss_res = float(np.dot(delta, delta))
    if ss_tot == 0.0:
        return 1.0 if ss_res == 0.0 else 0.0
    return (ss_tot - ss_res) / ss_tot


def fit_polynomial(U, V, degree: int = 2) -> FitReport:
    """Ordinary least-squares fit of ``U`` as a polynomial in ``V``.

    The fit runs on ``V`` mapped affinely onto ``[-1, 1]`` for conditioning and
    is converted back to monomial coefficients in ``V``.

    >>> rep = fit_polynomial([0.1, 0.4, 0.2, 0.9], [0.1, 0.4, 0.2, 0.9], degree=1)
    >>> [round(c, 12) + 0.0 for c in rep.coefficients], round(rep.d_E, 12)
    ([1.0, 0.0], 0.0)
    """
    u, v = _values(U), _values(V)
    if u.size != v.size:
        raise ValueError(f"length mismatch: {u.size} vs {v.size}")
    if degree < 1:
        raise ValueError("degree must be at least 1")
    if u.size < degree + 2:
        raise ValueError(f"need at least {degree + 2} points for a degree-{degree} fit")
    if np.unique(v).size < degree + 1:
        raise np.linalg.LinAlgError("rank-deficient design: too few distinct predictor values")

    poly = np.polynomial.Polynomial.fit(v, u, degree)
    fitted = poly(v)
    coefs = poly.convert().coef[::-1]
    coefs = np.concatenate([np.zeros(degree + 1 - coefs.size), coefs])
    raw = r_squared(u, fitted)
    r2 = min(max(raw, 0.0), 1.0)
    return FitReport(
        degree=degree,
        coefficients=[float(c) for c in coefs],
        residuals=u - fitted,
        deviations=u - u.mean(),
        r_squared=r2,
        r_squared_raw=raw,
        d_E=1.0 - r2,
        clamped=r2 != raw,
    )


def d_E(U, V, degree: int = 2) -> float:
    return fit_polynomial(U, V, degree).d_E


def select_degree(U, V, degrees: Sequence[int] = (1, 2, 3), k: int = 5, seed: int = 0):
    """Pick the polynomial degree with the lowest k-fold validation error.

    Returns ``(best_degree, {degree: mean squared validation error})``.
    """
    u, v = _values(U), _values(V)
    if u.size != v.size:
        raise ValueError("length mismatch")
    if u.size < k:
        raise ValueError("fewer points than folds")
    folds = np.array_split(np.random.default_rng(seed).permutation(u.size), k)
    scores = {}
    for deg in degrees:
        errs = []
        for f in folds:
            train = np.ones(u.size, dtype=bool)
            train[f] = False
            poly = np.polynomial.Polynomial.fit(v[train], u[train], deg)
            errs.append(np.mean((u[f] - poly(v[f])) ** 2))
        scores[deg] = float(np.mean(errs))
    best = min(scores, key=lambda d: (scores[d], d))
    return best, scores


# -- convergence in beta ---------------------------------------------------------


@dataclass
class ConvergenceRow:
    beta: float
    mean_depth: float
    mean_ratio: float
    mean_abs_ratio_dev: float
    fit: FitReport = field(repr=False)

    def to_dict(self) -> dict:
        slope, intercept = self.fit.coefficients
        return {
            "beta": self.beta,
            "mean_depth": self.mean_depth,
            "mean_ratio": self.mean_ratio,
            "mean_abs_ratio_dev": self.mean_abs_ratio_dev,
            "slope": slope,
            "intercept": intercept,
            "d_E": self.fit.d_E,
        }


def depth_ratio(num: np.ndarray, den: np.ndarray) -> np.ndarray:
    """Elementwise ``num/den`` with ``0/0`` read as 1 and ``x/0`` as ``nan``."""
    num = np.asarray(num, dtype=float)
    den = np.asarray(den, dtype=float)
    out = np.full(num.shape, np.nan)
    nz = den != 0
    out[nz] = num[nz] / den[nz]
    out[(den == 0) & (num == 0)] = 1.0
    return out


def skeleton_depths(Q, S, beta: float) -> np.ndarray:
    ev = BetaSkeletonDepth(S, beta)
    return np.array([r.value for r in ev.depths(Q)])


def convergence_table(Q, S, betas: Sequence[float], reference: Optional[np.ndarray] = None) -> List[ConvergenceRow]:
    """Per-beta comparison of SkD_beta with SkD_(beta+1) and with SkD_inf.

    Each row holds the mean depth, the mean ratio SkD_beta/SkD_(beta+1) and its
    mean absolute deviation from 1 over the queries, and the linear fit
    ``SkD_inf ~ f(SkD_beta)``. ``reference`` may pass precomputed SkD_inf values.
    """
    Q, S = as_points(Q), as_points(S)
    if reference is None:
        reference = skeleton_depths(Q, S, math.inf)
    rows = []
    for beta in betas:
        beta = check_beta(beta)
        cur = reference if is_inf_beta(beta) else skeleton_depths(Q, S, beta)
        nxt = reference if is_inf_beta(beta) else skeleton_depths(Q, S, beta + 1.0)
        ratio = depth_ratio(cur, nxt)
        ok = np.isfinite(ratio)
        fit = fit_polynomial(reference, cur, 1) if np.unique(cur).size >= 2 else _flat_fit(reference, cur)
        rows.append(
            ConvergenceRow(
                beta=beta,
                mean_depth=float(cur.mean()),
                mean_ratio=float(ratio[ok].mean()),
                mean_abs_ratio_dev=float(np.abs(ratio[ok] - 1.0).mean()),
                fit=fit,
            )
        )
    return rows


def _flat_fit(U, V) -> FitReport:
    # constant predictor: best linear fit is the mean of U
    u = _values(U)
    fitted = np.full(u.size, u.mean())
    raw = r_squared(u, fitted)
    r2 = min(max(raw, 0.0), 1.0)
    return FitReport(1, [0.0, float(u.mean())], u - fitted, u - u.mean(), r2, raw, 1.0 - r2, r2 != raw)


# -- d_E versus d_c --------------------------------------------------------------


def conjecture_report(reference, others: Dict[str, object], degree: int = 2) -> dict:
    """Observational comparison of ``d_E`` and ``d_c`` for several depth functions.

    ``reference`` is the depth vector being approximated (e.g. halfspace
    depth) and ``others`` maps a name to a competing depth vector. Returns the
    per-function values and the Spearman rank correlation between the two
    dissimilarities across functions (``nan`` with fewer than three).
    """
    ref = _values(reference)
    rows = []
    for name, vals in others.items():
        vals = _values(vals)
        rows.append({"name": name, "d_E": fit_polynomial(ref, vals, degree).d_E, "d_c": d_c_depths(ref, vals)})
    corr = math.nan
    if len(rows) >= 3:
        from scipy.stats import spearmanr

        corr = float(spearmanr([r["d_E"] for r in rows], [r["d_c"] for r in rows]).correlation)
    return {"rows": rows, "spearman": corr}
