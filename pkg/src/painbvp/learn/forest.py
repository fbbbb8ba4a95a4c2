"""Bagged and extremely randomized tree ensembles, plus impurity importance.

Per-tree randomness is derived from the master seed and the tree index, so
fits are reproducible regardless of execution order.
"""

from __future__ import annotations

import math

import numpy as np

from ..errors import InvalidInputError, InvalidParameterError
from .base import Estimator, check_X, check_X_y, check_is_fitted
from .tree import grow_tree

__all__ = [
    "RandomForestClassifier",
    "RandomForestRegressor",
    "ExtraTreesClassifier",
    "extra_trees_importance",
]


def _tree_rng(seed: int, index: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=(index,)))


def _resolve_max_features(max_features, n_features: int) -> int | None:
    if max_features is None:
        return None
    if max_features == "sqrt":
        return max(1, int(math.sqrt(n_features)))
    if isinstance(max_features, (int, np.integer)) and max_features >= 1:
        return int(max_features)
    raise InvalidParameterError(f"max_features must be None, 'sqrt' or a positive int, got {max_features!r}")


class _ForestBase(Estimator):
    task = "classification"
    splitter = "best"
    bootstrap = True

    def _fit_forest(self, X, y_enc, n_classes):
        n, d = X.shape
        k = _resolve_max_features(self.max_features, d)
        self.feature_importances_raw_ = np.zeros(d)
        self.trees_ = []
        for i in range(self.n_trees):
            rng = _tree_rng(self.seed, i)
            if self.bootstrap:
                idx = rng.integers(0, n, n)
            else:
                idx = np.arange(n)
            tree = grow_tree(
                X[idx],
                y_enc[idx],
                task=self.task,
                n_classes=n_classes,
                max_depth=self.max_depth,
                min_leaf=self.min_leaf,
                max_features=k,
                splitter=self.splitter,
                rng=rng,
                importances=self.feature_importances_raw_,
            )
            self.trees_.append(tree)
        total = self.feature_importances_raw_.sum()
        self.feature_importances_ = (
            self.feature_importances_raw_ / total if total > 0 else np.zeros(d)
        )


class RandomForestClassifier(_ForestBase):
    """Bagging ensemble of Gini trees with a random feature subset per split.

    Probabilities are the mean of per-tree leaf class frequencies.
    """

    def __init__(
        self,
        n_trees: int = 100,
        max_depth: int | None = None,
        max_features="sqrt",
        min_leaf: int = 1,
        seed: int = 0,
    ):
        self.n_trees = n_trees
        self.max_depth = max_depth
        self.max_features = max_features
        self.min_leaf = min_leaf
        self.seed = seed

    def fit(self, X, y):
        X, y = check_X_y(X, y)
        if self.n_trees < 1:
            raise InvalidParameterError("n_trees must be >= 1")
        self.classes_ = np.unique(y)
        y_enc = np.searchsorted(self.classes_, y)
        self._fit_forest(X, y_enc, len(self.classes_))
        self.fitted_ = True
        return self

    def predict_proba(self, X):
        check_is_fitted(self)
        X = check_X(X)
        proba = np.zeros((len(X), len(self.classes_)))
        for tree in self.trees_:
            proba += tree.predict_rows(X)
        proba /= len(self.trees_)
        return proba / proba.sum(axis=1, keepdims=True)

    def predict(self, X):
        return self.classes_[np.argmax(self.predict_proba(X), axis=1)]


class RandomForestRegressor(_ForestBase):
    """Bagging ensemble of variance-reduction trees; prediction is the mean."""

    task = "regression"

    def __init__(
        self,
        n_trees: int = 100,
        max_depth: int | None = None,
        max_features="sqrt",
        min_leaf: int = 1,
        seed: int = 0,
    ):
        self.n_trees = n_trees
        self.max_depth = max_depth
        self.max_features = max_features
        self.min_leaf = min_leaf
        self.seed = seed

    def fit(self, X, y):
        X, y = check_X_y(X, y)
        if self.n_trees < 1:
            raise InvalidParameterError("n_trees must be >= 1")
        self._fit_forest(X, y.astype(np.float64), 0)
        self.fitted_ = True
        return self

    def predict(self, X):
        check_is_fitted(self)
        X = check_X(X)
        acc = np.zeros(len(X))
        for tree in self.trees_:
            acc += tree.predict_rows(X)[:, 0]
        return acc / len(self.trees_)


class ExtraTreesClassifier(RandomForestClassifier):
    """Extremely randomized trees: full-sample training, one uniform random
    threshold per candidate feature, best Gini among those."""

    splitter = "random"
    bootstrap = False


def extra_trees_importance(X, y, n_trees: int = 200, seed: int = 0) -> np.ndarray:
    """Normalized total Gini decrease per feature from an extra-trees forest.

    Importances sum to 1 (given at least one split happened anywhere);
    features never selected, e.g. constants, get 0.
    """
    X, y = check_X_y(X, y)
    if len(np.unique(y)) < 2:
        raise InvalidInputError("importance needs at least 2 classes")
    model = ExtraTreesClassifier(n_trees=n_trees, seed=seed).fit(X, y)
    return model.feature_importances_
