import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from skdepth.analysis import (
    DepthVector,
    conjecture_report,
    convergence_table,
    d_c,
    d_c_depths,
    d_E,
    depth_poset,
    depth_ratio,
    fit_polynomial,
    r_squared,
    select_degree,
    tie_count,
)

# coarse values so ties actually occur
depth_values = st.lists(st.integers(0, 6).map(lambda k: k / 6), min_size=2, max_size=12)


def _triple(n):
    vec = st.lists(st.integers(0, 5).map(lambda k: k / 5), min_size=n, max_size=n)
    return st.tuples(vec, vec, vec)


class TestPoset:
    def test_strict_chain(self):
        M = depth_poset([0.1, 0.2, 0.3])
        assert M.tolist() == [[1, 1, 1], [0, 1, 1], [0, 0, 1]]

    def test_all_equal(self):
        assert depth_poset([0.4] * 4).tolist() == np.ones((4, 4), dtype=int).tolist()

    def test_mutual_relation(self):
        M = depth_poset([0.2, 0.1, 0.2])
        assert M[0, 2] == M[2, 0] == 1
        assert M[1, 0] == 1 and M[0, 1] == 0

    @given(depth_values)
    def test_reflexive_transitive_total(self, vals):
        M = depth_poset(vals).astype(bool)
        assert M.diagonal().all()
        assert (M | M.T).all()
        # transitivity: M @ M has no path where M has none
        assert not ((M.astype(int) @ M.astype(int) > 0) & ~M).any()

    @given(depth_values)
    def test_strictly_increasing_map_invariance(self, vals):
        v = np.array(vals)
        assert np.array_equal(depth_poset(v), depth_poset(np.exp(3 * v) - 7))
        assert np.array_equal(depth_poset(v), depth_poset(v**3 + v))


class TestDc:
    def test_identity(self):
        M = depth_poset([0.3, 0.1, 0.5])
        assert d_c(M, M) == 0.0

    @pytest.mark.parametrize("n", [2, 5, 40])
    def test_reversal_is_one(self, n):
        v = np.arange(n) / n
        assert d_c_depths(v, v[::-1]) == 1.0
        assert d_c_depths(v, -v) == 1.0

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            d_c(np.ones((3, 3)), np.ones((4, 4)))
        with pytest.raises(ValueError):
            d_c_depths([0.1, 0.2], [0.1, 0.2, 0.3])

    def test_hand_count(self):
        # u: 0<1<2 ; v: 0=1<2 -> entry (1,0) differs only
        assert d_c_depths([0.1, 0.2, 0.3], [0.1, 0.1, 0.3]) == pytest.approx(1 / 6)

    @given(st.integers(2, 10).flatmap(_triple))
    def test_metric_axioms(self, t):
        a, b, c = (depth_poset(x) for x in t)
        ab, bc, ac = (d_c(x, y, exact=True) for x, y in ((a, b), (b, c), (a, c)))
        assert ab >= 0 and ab == d_c(b, a, exact=True)
        assert (ab == 0) == np.array_equal(a, b)
        assert ac <= ab + bc
        assert float(ab) == d_c(a, b)

    def test_monotone_rescaling_invariance(self, rng):
        u, v = rng.uniform(size=(2, 30))
        assert d_c_depths(u, v) == d_c_depths(np.sqrt(u), v ** 2 + 1)

    def test_tie_count(self):
        assert tie_count([0.1, 0.1, 0.2, 0.2, 0.2]) == 1 + 3
        assert tie_count(DepthVector([0.1, 0.3])) == 0


class TestFit:
    def test_perfect_linear(self):
        u = np.array([0.1, 0.4, 0.2, 0.9, 0.5])
        rep = fit_polynomial(u, u, 1)
        assert rep.coefficients == pytest.approx([1.0, 0.0], abs=1e-12)
        assert rep.d_E == pytest.approx(0.0, abs=1e-12)

    def test_recovers_quadratic(self, rng):
        v = rng.uniform(0, 1, 200)
        u = 4.26 * v**2 - 2.76 * v + 0.47
        rep = fit_polynomial(u, v, 2)
        assert rep.coefficients == pytest.approx([4.26, -2.76, 0.47], abs=1e-9)
        assert rep.d_E < 1e-12
        assert rep.predict([0.5]) == pytest.approx([4.26 / 4 - 1.38 + 0.47])

    def test_matches_polyfit_oracle(self, rng):
        v = rng.uniform(0, 1, 100)
        u = v + rng.normal(0, 0.1, 100)
        rep = fit_polynomial(u, v, 2)
        coef = np.polyfit(v, u, 2)
        assert rep.coefficients == pytest.approx(coef.tolist(), abs=1e-9)
        resid = u - np.polyval(coef, v)
        xi = u - u.mean()
        assert rep.r_squared == pytest.approx(1 - resid @ resid / (xi @ xi), abs=1e-12)

    def test_independent_data_near_one(self, rng):
        u, v = rng.uniform(size=(2, 2000))
        assert fit_polynomial(u, v, 1).d_E > 0.99

    def test_definitions(self, rng):
        v = rng.uniform(size=50)
        u = np.sin(3 * v) + rng.normal(0, 0.05, 50)
        rep = fit_polynomial(u, v, 2)
        assert np.allclose(rep.deviations, u - u.mean())
        assert rep.d_E == pytest.approx(1 - rep.r_squared)
        num = np.sum(rep.deviations**2 - rep.residuals**2)
        assert rep.r_squared == pytest.approx(num / np.sum(rep.deviations**2))

    def test_clamping(self):
        u = np.array([1.0, 2.0, 3.0])
        assert r_squared(u, [3.0, 1.0, 0.0]) < 0
        assert r_squared([2.0, 2.0], [2.0, 2.0]) == 1.0
        assert r_squared([2.0, 2.0], [2.0, 1.0]) == 0.0

    def test_errors(self):
        with pytest.raises(ValueError):
            fit_polynomial([0.1, 0.2, 0.3], [0.1, 0.2], 1)
        with pytest.raises(ValueError):
            fit_polynomial([0.1, 0.2, 0.3], [0.1, 0.2, 0.3], 2)
        with pytest.raises(np.linalg.LinAlgError):
            fit_polynomial([0.1, 0.2, 0.3, 0.4], [0.5] * 4, 1)

    # near-degenerate predictors are part of the search space
    @pytest.mark.filterwarnings("ignore:The fit may be poorly conditioned")
    @settings(max_examples=200)
    @given(
        arrays(float, 12, elements=st.floats(0, 1)),
        arrays(float, 12, elements=st.floats(0, 1)),
        st.integers(1, 3),
    )
    def test_d_E_in_unit_interval(self, u, v, degree):
        if np.unique(v).size < degree + 1:
            return
        rep = fit_polynomial(u, v, degree)
        assert 0.0 <= rep.d_E <= 1.0
        if rep.d_E == 0.0:
            assert np.allclose(rep.residuals, 0.0, atol=1e-6)

    def test_to_dict(self, rng):
        v = rng.uniform(size=30)
        d = fit_polynomial(v**2, v, 2).to_dict()
        assert set(d) == {
            "degree", "coefficients", "r_squared", "r_squared_raw", "d_E", "clamped", "n", "residual_percentiles",
        }
        assert d["n"] == 30

    def test_select_degree(self, rng):
        v = rng.uniform(size=300)
        best, scores = select_degree(2 * v**2 - v + rng.normal(0, 0.01, 300), v)
        assert best == 2 and set(scores) == {1, 2, 3}
        best, _ = select_degree(3 * v + rng.normal(0, 0.01, 300), v)
        assert best in (1, 2, 3) and _[1] <= _[2] * 1.05

    def test_d_E_shortcut(self, rng):
        v = rng.uniform(size=40)
        u = v + rng.normal(0, 0.1, 40)
        assert d_E(u, v) == fit_polynomial(u, v, 2).d_E


class TestConvergence:
    def test_depth_ratio(self):
        r = depth_ratio([0.0, 0.5, 0.2], [0.0, 0.5, 0.0])
        assert r[0] == 1.0 and r[1] == 1.0 and math.isnan(r[2])

    def test_single_pair_ratio_one(self):
        S = [(-1.0, 0.0), (1.0, 0.0)]
        Q = [(0.0, 0.0), (0.1, 0.1), (-0.2, 0.05)]
        for row in convergence_table(Q, S, [1, 2, 5]):
            assert row.mean_ratio == 1.0 and row.mean_abs_ratio_dev == 0.0

    def test_large_beta_matches_slab(self, rng):
        S = rng.uniform(-10, 10, size=(80, 2))
        Q = rng.uniform(-10, 10, size=(40, 2))
        rows = convergence_table(Q, S, [1, 10000])
        big = rows[1].to_dict()
        assert abs(big["slope"] - 1) <= 0.01 and abs(big["intercept"]) <= 0.01
        assert big["d_E"] <= 1e-3
        assert rows[0].mean_depth < rows[1].mean_depth

    def test_infinite_row(self, rng):
        S = rng.uniform(-10, 10, size=(30, 2))
        Q = rng.uniform(-10, 10, size=(10, 2))
        row = convergence_table(Q, S, [math.inf])[0]
        assert row.mean_ratio == 1.0 and row.fit.d_E == pytest.approx(0.0, abs=1e-12)


def test_conjecture_report(rng):
    ref = rng.uniform(size=50)
    others = {"same": ref, "noisy": ref + rng.normal(0, 0.05, 50), "random": rng.uniform(size=50)}
    rep = conjecture_report(ref, others)
    by = {r["name"]: r for r in rep["rows"]}
    assert by["same"]["d_c"] == 0.0
    assert -1.0 <= rep["spearman"] <= 1.0
    assert math.isnan(conjecture_report(ref, {"same": ref})["spearman"])
