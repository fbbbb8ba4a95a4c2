import numpy as np
import pytest

from painbvp.learn import (
    ExtraTreesClassifier,
    RandomForestClassifier,
    RandomForestRegressor,
    extra_trees_importance,
)


class TestRandomForestClassifier:
    def test_memorizes_distinct_points(self, rng):
        X = rng.standard_normal((40, 3))
        y = rng.integers(0, 2, 40)
        while len(np.unique(y)) < 2:
            y = rng.integers(0, 2, 40)
        model = RandomForestClassifier(n_trees=50, max_depth=None, min_leaf=1, seed=0).fit(X, y)
        assert np.mean(model.predict(X) == y) == 1.0

    def test_same_seed_identical(self, rng):
        X = rng.standard_normal((60, 4))
        y = rng.integers(0, 3, 60)
        test = rng.standard_normal((30, 4))
        a = RandomForestClassifier(n_trees=20, seed=7).fit(X, y)
        b = RandomForestClassifier(n_trees=20, seed=7).fit(X, y)
        np.testing.assert_array_equal(a.predict_proba(test), b.predict_proba(test))

    def test_constant_features_predict_majority(self, rng):
        X = np.ones((30, 3))
        y = np.array([0] * 20 + [1] * 10)
        model = RandomForestClassifier(n_trees=10, seed=0).fit(X, y)
        assert np.all(model.predict(rng.standard_normal((5, 3))) == 0)

    def test_proba_rows_sum_to_one(self, rng):
        X = rng.standard_normal((50, 3))
        y = rng.integers(0, 3, 50)
        model = RandomForestClassifier(n_trees=15, seed=1).fit(X, y)
        proba = model.predict_proba(rng.standard_normal((20, 3)))
        assert np.max(np.abs(proba.sum(axis=1) - 1.0)) < 1e-9

    def test_monotone_transform_invariance(self, rng):
        X = rng.standard_normal((80, 4))
        y = (X[:, 0] + 0.5 * X[:, 2] > 0).astype(int)
        test = rng.standard_normal((40, 4))
        model_a = RandomForestClassifier(n_trees=25, seed=3).fit(X, y)
        pred_a = model_a.predict(test)
        Xt = X.copy()
        Xt[:, 2] = Xt[:, 2] ** 3  # strictly monotone transform of one feature
        test_t = test.copy()
        test_t[:, 2] = test_t[:, 2] ** 3
        model_b = RandomForestClassifier(n_trees=25, seed=3).fit(Xt, y)
        np.testing.assert_array_equal(model_b.predict(test_t), pred_a)


class TestRandomForestRegressor:
    def test_fits_smooth_function(self, rng):
        X = rng.uniform(0, 1, (300, 1))
        y = np.sin(2 * np.pi * X[:, 0])
        model = RandomForestRegressor(n_trees=50, max_features=None, seed=0).fit(X, y)
        pred = model.predict(X)
        assert np.mean(np.abs(pred - y)) < 0.1


class TestExtraTreesImportance:
    def test_sums_to_one(self, rng):
        X = rng.standard_normal((80, 5))
        y = (X[:, 1] > 0).astype(int)
        imp = extra_trees_importance(X, y, n_trees=50, seed=0)
        assert imp.sum() == pytest.approx(1.0, abs=1e-9)

    def test_label_copy_ranks_first(self, rng):
        wins = 0
        for seed in range(100):
            r = np.random.default_rng(seed)
            y = r.integers(0, 2, 60)
            X = np.column_stack([y.astype(float), r.standard_normal((60, 4))])
            imp = extra_trees_importance(X, y, n_trees=30, seed=seed)
            if np.argmax(imp) == 0:
                wins += 1
        assert wins >= 99

    def test_constant_feature_zero(self, rng):
        X = rng.standard_normal((60, 4))
        X[:, 2] = 5.0
        y = (X[:, 0] > 0).astype(int)
        imp = extra_trees_importance(X, y, n_trees=40, seed=0)
        assert imp[2] == 0.0

    def test_extra_trees_deterministic(self, rng):
        X = rng.standard_normal((50, 4))
        y = rng.integers(0, 2, 50)
        a = ExtraTreesClassifier(n_trees=20, seed=2).fit(X, y).feature_importances_
        b = ExtraTreesClassifier(n_trees=20, seed=2).fit(X, y).feature_importances_
        np.testing.assert_array_equal(a, b)
