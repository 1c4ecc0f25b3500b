import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fastgrad import (
    CountingOracle,
    LogRegProblem,
    QuadraticProblem,
    SplitMix64,
    check_gradient,
    gen_logreg,
    lipschitz_upper_bound,
    load_logreg_csv,
    logreg_value_grad,
    ogmgl_run,
    quadratic_value_grad,
)


class TestQuadratic:
    def test_ill_conditioned_instance(self):
        p = QuadraticProblem(diag=np.array([1000.0, 0.1]))
        value, grad = quadratic_value_grad(p, np.array([1.0, 1.0]))
        assert value == pytest.approx(500.05, rel=1e-15)
        assert np.allclose(grad, [1000.0, 0.1], rtol=1e-15)
        assert p.known_L == 1000.0 and p.known_mu == 0.1 and p.known_fstar == 0.0

    def test_minimizer(self):
        p = QuadraticProblem(diag=np.array([3.0, 7.0, 0.2]))
        value, grad = quadratic_value_grad(p, np.zeros(3))
        assert value == 0.0
        assert np.array_equal(grad, np.zeros(3))

    def test_one_dim(self):
        p = QuadraticProblem(diag=np.array([2.0]))
        value, grad = quadratic_value_grad(p, np.array([3.0]))
        assert value == 9.0
        assert grad[0] == 6.0

    def test_dimension_mismatch(self):
        p = QuadraticProblem(diag=np.array([1.0, 2.0]))
        with pytest.raises(ValueError, match="dimension mismatch"):
            quadratic_value_grad(p, np.ones(3))

    def test_rejects_non_positive_curvature(self):
        with pytest.raises(ValueError):
            QuadraticProblem(diag=np.array([1.0, 0.0]))

    @given(st.integers(0, 10_000))
    @settings(max_examples=40, deadline=None)
    def test_strong_convexity_sandwich(self, seed):
        # mu/2 |x - x*|^2 <= f(x) - f* <= |grad f(x)|^2 / (2 mu)
        rng = np.random.default_rng(seed)
        dim = int(rng.integers(1, 8))
        diag = 10.0 ** rng.uniform(-1.0, 2.0, size=dim)
        p = QuadraticProblem(diag=diag)
        x = rng.normal(size=dim) * 4.0
        value, grad = quadratic_value_grad(p, x)
        mu = p.known_mu
        lower = 0.5 * mu * float(np.dot(x, x))
        upper = float(np.dot(grad, grad)) / (2.0 * mu)
        assert lower <= value * (1 + 1e-12)
        assert value <= upper * (1 + 1e-12)


class TestLogReg:
    def test_zero_weights_identity(self):
        p = gen_logreg(40, 7, reg=1.0, seed=9)
        w = np.zeros(7)
        value, grad = logreg_value_grad(p, w)
        assert value == pytest.approx(40 * math.log(2.0), rel=1e-14)
        expected = -0.5 * (p.features.T @ p.labels)
        assert np.allclose(grad, expected, rtol=1e-12, atol=1e-12)

    def test_single_sample(self):
        p = LogRegProblem(features=np.array([[1.0]]), labels=np.array([1.0]), reg=1.0)
        value, grad = logreg_value_grad(p, np.zeros(1))
        assert value == pytest.approx(math.log(2.0), rel=1e-14)
        assert grad[0] == pytest.approx(-0.5, rel=1e-14)

    def test_gradient_matches_finite_differences(self):
        p = gen_logreg(25, 10, reg=1.0, seed=17)
        obj = p.objective()
        rng = np.random.default_rng(23)
        for _ in range(5):
            assert check_gradient(obj, rng.normal(size=10)) <= 1e-5

    def test_overflow_safe_far_from_origin(self):
        p = gen_logreg(10, 4, reg=1.0, seed=1)
        value, grad = logreg_value_grad(p, np.full(4, 500.0))
        assert math.isfinite(value)
        assert np.all(np.isfinite(grad))

    def test_convexity_spot_check(self):
        p = gen_logreg(30, 6, reg=1.0, seed=13)
        rng = np.random.default_rng(29)
        for _ in range(1000):
            x = rng.normal(size=6) * 2
            y = rng.normal(size=6) * 2
            lam = rng.uniform()
            mid = lam * x + (1 - lam) * y
            f = lambda w: logreg_value_grad(p, w)[0]
            assert f(mid) <= lam * f(x) + (1 - lam) * f(y) + 1e-9

    def test_strong_convexity_certificate(self):
        # f(w) - reg/2 |w|^2 stays convex, certifying mu >= reg
        p = gen_logreg(30, 6, reg=1.0, seed=31)
        rng = np.random.default_rng(37)

        def centered(w):
            return logreg_value_grad(p, w)[0] - 0.5 * p.reg * float(np.dot(w, w))

        for _ in range(1000):
            x = rng.normal(size=6) * 2
            y = rng.normal(size=6) * 2
            lam = rng.uniform()
            mid = lam * x + (1 - lam) * y
            assert centered(mid) <= lam * centered(x) + (1 - lam) * centered(y) + 1e-9

    def test_labels_and_finiteness(self):
        p = gen_logreg(50, 8, reg=0.5, seed=101)
        assert set(np.unique(p.labels)) <= {-1.0, 1.0}
        assert np.all(np.isfinite(p.features))

    def test_rejects_invalid_labels(self):
        with pytest.raises(ValueError, match="labels"):
            LogRegProblem(features=np.ones((2, 2)), labels=np.array([1.0, 0.5]), reg=1.0)

    def test_rejects_non_positive_reg(self):
        with pytest.raises(ValueError, match="reg"):
            LogRegProblem(features=np.ones((1, 1)), labels=np.array([1.0]), reg=0.0)


class TestGeneration:
    def test_deterministic_bit_for_bit(self):
        a = gen_logreg(10, 5, reg=1.0, seed=42)
        b = gen_logreg(10, 5, reg=1.0, seed=42)
        assert np.array_equal(a.features, b.features)
        assert np.array_equal(a.labels, b.labels)

    def test_different_seeds_differ(self):
        a = gen_logreg(10, 5, reg=1.0, seed=42)
        b = gen_logreg(10, 5, reg=1.0, seed=43)
        assert not np.array_equal(a.features, b.features)

    def test_rejects_empty_shapes(self):
        with pytest.raises(ValueError):
            gen_logreg(0, 5, reg=1.0, seed=1)

    def test_stream_statistics_plausible(self):
        draws = SplitMix64(7).normals(20_000)
        assert abs(float(np.mean(draws))) < 0.05
        assert abs(float(np.std(draws)) - 1.0) < 0.05

    def test_sign_stream(self):
        signs = SplitMix64(11).signs(500)
        assert set(np.unique(signs)) == {-1.0, 1.0}
        assert 150 < int(np.sum(signs == 1.0)) < 350

    def test_uniform_range(self):
        g = SplitMix64(3)
        us = [g.uniform() for _ in range(1000)]
        assert all(0.0 <= u < 1.0 for u in us)


class TestCsvImport:
    def test_round_trip(self, tmp_path):
        p = gen_logreg(12, 4, reg=2.0, seed=77)
        path = tmp_path / "data.csv"
        rows = np.hstack([p.features, p.labels[:, None]])
        np.savetxt(path, rows, delimiter=",")
        loaded = load_logreg_csv(str(path), reg=2.0)
        assert np.allclose(loaded.features, p.features, rtol=1e-12)
        assert np.array_equal(loaded.labels, p.labels)

    def test_rejects_bad_labels(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("1.0,2.0,0.7\n")
        with pytest.raises(ValueError, match="labels"):
            load_logreg_csv(str(path), reg=1.0)

    def test_rejects_single_column(self, tmp_path):
        path = tmp_path / "thin.csv"
        path.write_text("1.0\n-1.0\n")
        with pytest.raises(ValueError, match="label column"):
            load_logreg_csv(str(path), reg=1.0)


class TestLipschitzBound:
    def test_identity_features(self):
        p = LogRegProblem(features=np.eye(2), labels=np.array([1.0, -1.0]), reg=1.0)
        assert lipschitz_upper_bound(p) == pytest.approx(1.25, rel=1e-6)

    def test_rank_one_row(self):
        # lambda_max of the Gram matrix for a single row is its squared norm
        p = LogRegProblem(
            features=np.array([[3.0, 4.0]]), labels=np.array([1.0]), reg=1e-12
        )
        assert lipschitz_upper_bound(p) == pytest.approx(6.25, rel=1e-6)

    def test_matches_dense_eigensolver(self):
        p = gen_logreg(60, 40, reg=1.0, seed=55)
        lam = float(np.linalg.eigvalsh(p.features.T @ p.features).max())
        assert lipschitz_upper_bound(p) == pytest.approx(1.0 + 0.25 * lam, rel=1e-3)

    def test_desk_instance_brackets_adaptive_estimate(self):
        p = gen_logreg(110, 100, reg=1.0, seed=42)
        bound = lipschitz_upper_bound(p)
        oracle = CountingOracle(p.objective())
        x0 = SplitMix64(4).normals(p.dim)
        out = ogmgl_run(oracle, x0, 1.0, 10)
        assert out.L_end <= 2.0 * bound
