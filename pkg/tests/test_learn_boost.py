import numpy as np

from painbvp.learn import (
    AdaBoostClassifier,
    AdaBoostRegressor,
    GradientBoostedClassifier,
    GradientBoostedRegressor,
)


def xor_data(rng, n=200, depth_noise=0.1):
    X = rng.uniform(-1, 1, (n, 2))
    y = ((X[:, 0] > 0) ^ (X[:, 1] > 0)).astype(int)
    return X, y


class TestAdaBoost:
    def test_threshold_separable_within_ten_rounds(self, rng):
        X = np.sort(rng.uniform(-1, 1, (80, 1)), axis=0)
        y = (X[:, 0] > 0.2).astype(int)
        model = AdaBoostClassifier(n_rounds=10, seed=0).fit(X, y)
        assert np.mean(model.predict(X) == y) == 1.0

    def test_xor_stays_below_perfect(self, rng):
        X, y = xor_data(rng)
        model = AdaBoostClassifier(n_rounds=50, seed=0).fit(X, y)
        assert np.mean(model.predict(X) == y) < 1.0

    def test_multiclass(self, rng):
        centers = np.array([[0, 0], [5, 0], [0, 5]])
        X = np.vstack([rng.standard_normal((40, 2)) * 0.4 + c for c in centers])
        y = np.repeat([0, 1, 2], 40)
        model = AdaBoostClassifier(n_rounds=40, seed=0).fit(X, y)
        assert np.mean(model.predict(X) == y) > 0.95

    def test_proba_rows_sum_to_one(self, rng):
        X, y = xor_data(rng, n=100)
        model = AdaBoostClassifier(n_rounds=20, seed=0).fit(X, y)
        proba = model.predict_proba(X)
        assert np.max(np.abs(proba.sum(axis=1) - 1.0)) < 1e-9

    def test_unlearnable_falls_back_to_priors(self, caplog):
        X = np.ones((20, 2))
        y = np.array([0, 1] * 10)
        model = AdaBoostClassifier(n_rounds=5, seed=0).fit(X, y)
        assert model.prior_fallback_
        proba = model.predict_proba(np.zeros((3, 2)))
        np.testing.assert_allclose(proba, 0.5, atol=1e-12)


class TestAdaBoostRegressor:
    def test_fits_step_function(self, rng):
        X = rng.uniform(0, 1, (200, 1))
        y = (X[:, 0] > 0.5).astype(float) * 2.0 + 1.0
        model = AdaBoostRegressor(n_rounds=30, max_depth=2, seed=0).fit(X, y)
        assert np.mean(np.abs(model.predict(X) - y)) < 0.2


class TestGradientBoosting:
    def test_regression_identity_function(self):
        X = np.linspace(0, 1, 200)[:, None]
        y = X[:, 0]
        model = GradientBoostedRegressor(
            n_rounds=200, learning_rate=0.1, max_depth=3, l2_leaf_lambda=0.0
        ).fit(X, y)
        assert np.mean(np.abs(model.predict(X) - y)) < 0.02

    def test_huge_lambda_predicts_base_score(self, rng):
        X = rng.standard_normal((100, 2))
        y = rng.standard_normal(100) + 3.0
        model = GradientBoostedRegressor(n_rounds=20, l2_leaf_lambda=1e9).fit(X, y)
        pred = model.predict(X)
        assert np.max(np.abs(pred - y.mean())) < 1e-3

    def test_xor_classification(self, rng):
        X, y = xor_data(rng, n=300)
        model = GradientBoostedClassifier(
            n_rounds=100, learning_rate=0.1, max_depth=2, l2_leaf_lambda=1.0, seed=0
        ).fit(X, y)
        assert np.mean(model.predict(X) == y) >= 0.95

    def test_training_loss_non_increasing(self, rng):
        X = rng.standard_normal((150, 3))
        y = (X[:, 0] + X[:, 1] * X[:, 2] > 0).astype(int)
        for lr in (0.05, 0.1, 0.3):
            model = GradientBoostedClassifier(
                n_rounds=60, learning_rate=lr, max_depth=3, seed=0
            ).fit(X, y)
            for losses in model.loss_history_:
                diffs = np.diff(losses)
                assert np.all(diffs <= 1e-12)

    def test_multiclass_proba_sums_to_one(self, rng):
        X = rng.standard_normal((90, 3))
        y = rng.integers(0, 3, 90)
        model = GradientBoostedClassifier(n_rounds=20, seed=0).fit(X, y)
        proba = model.predict_proba(rng.standard_normal((25, 3)))
        assert np.max(np.abs(proba.sum(axis=1) - 1.0)) < 1e-9

    def test_deterministic(self, rng):
        X = rng.standard_normal((80, 3))
        y = (X[:, 0] > 0).astype(int)
        test = rng.standard_normal((20, 3))
        a = GradientBoostedClassifier(n_rounds=30, seed=4).fit(X, y).predict_proba(test)
        b = GradientBoostedClassifier(n_rounds=30, seed=4).fit(X, y).predict_proba(test)
        np.testing.assert_array_equal(a, b)

    def test_monotone_transform_invariance(self, rng):
        X = rng.standard_normal((120, 3))
        y = (X[:, 1] > 0.3).astype(int)
        test = rng.standard_normal((40, 3))
        base = GradientBoostedClassifier(n_rounds=25, seed=0).fit(X, y).predict(test)
        Xt = X.copy()
        testt = test.copy()
        Xt[:, 1] = np.exp(Xt[:, 1])
        testt[:, 1] = np.exp(testt[:, 1])
        transformed = GradientBoostedClassifier(n_rounds=25, seed=0).fit(Xt, y).predict(testt)
        np.testing.assert_array_equal(base, transformed)
