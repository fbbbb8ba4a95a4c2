"""Boosting families: multiclass AdaBoost (SAMME) on stumps, AdaBoost.R2,
and second-order gradient-boosted trees for classification and regression."""

from __future__ import annotations

import logging

import numpy as np

from ..errors import InvalidInputError, InvalidParameterError, TrainingDivergedError
from .base import Estimator, check_X, check_X_y, check_is_fitted, sigmoid
from .tree import grow_newton_tree, grow_tree

__all__ = ["AdaBoostClassifier", "AdaBoostRegressor", "GradientBoostedClassifier", "GradientBoostedRegressor"]

log = logging.getLogger(__name__)

_EPS = 1e-12


class AdaBoostClassifier(Estimator):
    """SAMME boosting of depth-1 Gini stumps.

    Instance weights are renormalized to sum 1 every round; a round whose
    weighted error is not below 1 - 1/K is skipped.  If even the first
    stump cannot beat chance, the model falls back to predicting the class
    priors everywhere (with a warning).
    """

    def __init__(self, n_rounds: int = 50, seed: int = 0):
        self.n_rounds = n_rounds
        self.seed = seed

    def fit(self, X, y):
        X, y = check_X_y(X, y)
        self.classes_ = np.unique(y)
        k = len(self.classes_)
        if k < 2:
            raise InvalidInputError("need at least 2 classes")
        y_enc = np.searchsorted(self.classes_, y)
        n = len(X)
        w = np.full(n, 1.0 / n)
        rng = np.random.default_rng(self.seed)
        self.stumps_ = []
        self.alphas_ = []
        self.prior_fallback_ = False
        self.priors_ = np.bincount(y_enc, minlength=k) / n
        chance = 1.0 - 1.0 / k
        for round_idx in range(self.n_rounds):
            stump = grow_tree(
                X,
                y_enc,
                task="classification",
                n_classes=k,
                max_depth=1,
                min_leaf=1,
                sample_weight=w,
                rng=rng,
            )
            pred = np.argmax(stump.predict_rows(X), axis=1)
            miss = pred != y_enc
            err = float(w[miss].sum())
            if err >= chance:
                if round_idx == 0:
                    log.warning("first weak learner cannot beat chance; predicting priors")
                    self.prior_fallback_ = True
                    break
                continue
            err = max(err, _EPS)
            alpha = np.log((1.0 - err) / err) + np.log(k - 1.0)
            w = w * np.exp(alpha * miss)
            w /= w.sum()
            self.stumps_.append(stump)
            self.alphas_.append(alpha)
        if not self.stumps_ and not self.prior_fallback_:
            self.prior_fallback_ = True
        self.fitted_ = True
        return self

    def _votes(self, X):
        k = len(self.classes_)
        votes = np.zeros((len(X), k))
        for stump, alpha in zip(self.stumps_, self.alphas_):
            pred = np.argmax(stump.predict_rows(X), axis=1)
            votes[np.arange(len(X)), pred] += alpha
        return votes

    def predict_proba(self, X):
        check_is_fitted(self)
        X = check_X(X)
        if self.prior_fallback_:
            return np.tile(self.priors_, (len(X), 1))
        votes = self._votes(X)
        totals = votes.sum(axis=1, keepdims=True)
        uniform = np.full_like(votes, 1.0 / votes.shape[1])
        with np.errstate(invalid="ignore", divide="ignore"):
            proba = np.where(totals > 0, votes / totals, uniform)
        return proba

    def predict(self, X):
        return self.classes_[np.argmax(self.predict_proba(X), axis=1)]


class AdaBoostRegressor(Estimator):
    """AdaBoost.R2 with shallow variance-reduction trees as weak learners.

    Each round trains on a weighted bootstrap draw; the ensemble predicts
    the weighted median of the rounds' outputs.
    """

    def __init__(self, n_rounds: int = 50, max_depth: int = 3, seed: int = 0):
        self.n_rounds = n_rounds
        self.max_depth = max_depth
        self.seed = seed

    def fit(self, X, y):
        X, y = check_X_y(X, y)
        y = y.astype(np.float64)
        n = len(X)
        rng = np.random.default_rng(self.seed)
        w = np.full(n, 1.0 / n)
        self.trees_ = []
        self.betas_ = []
        for _ in range(self.n_rounds):
            idx = rng.choice(n, n, replace=True, p=w)
            tree = grow_tree(
                X[idx],
                y[idx],
                task="regression",
                n_classes=0,
                max_depth=self.max_depth,
                min_leaf=1,
                rng=rng,
            )
            pred = tree.predict_rows(X)[:, 0]
            abs_err = np.abs(pred - y)
            max_err = abs_err.max()
            if max_err <= 0:
                self.trees_.append(tree)
                self.betas_.append(_EPS)
                break
            loss = abs_err / max_err
            lbar = float((w * loss).sum())
            if lbar >= 0.5:
                continue
            beta = lbar / (1.0 - lbar)
            w = w * np.power(beta, 1.0 - loss)
            w /= w.sum()
            self.trees_.append(tree)
            self.betas_.append(beta)
        if not self.trees_:
            self.fallback_ = float(np.median(y))
        self.fitted_ = True
        return self

    def predict(self, X):
        check_is_fitted(self)
        X = check_X(X)
        if not self.trees_:
            return np.full(len(X), self.fallback_)
        preds = np.column_stack([t.predict_rows(X)[:, 0] for t in self.trees_])
        weights = np.log(1.0 / np.maximum(np.array(self.betas_), _EPS))
        order = np.argsort(preds, axis=1, kind="stable")
        sorted_preds = np.take_along_axis(preds, order, axis=1)
        sorted_w = weights[order]
        cum = np.cumsum(sorted_w, axis=1)
        half = 0.5 * cum[:, -1:]
        pick = np.argmax(cum >= half, axis=1)
        return sorted_preds[np.arange(len(X)), pick]


class GradientBoostedClassifier(Estimator):
    """Newton-boosted trees on the logistic loss; multiclass is one-vs-rest.

    Leaf values are -G/(H + lambda); split gain is the standard second-order
    formula; shrinkage by ``learning_rate``.  The base score per column is
    the log-odds of its positive class.
    """

    def __init__(
        self,
        n_rounds: int = 100,
        learning_rate: float = 0.1,
        max_depth: int = 3,
        l2_leaf_lambda: float = 1.0,
        min_leaf: int = 1,
        seed: int = 0,
    ):
        self.n_rounds = n_rounds
        self.learning_rate = learning_rate
        self.max_depth = max_depth
        self.l2_leaf_lambda = l2_leaf_lambda
        self.min_leaf = min_leaf
        self.seed = seed

    def fit(self, X, y):
        X, y = check_X_y(X, y)
        if self.n_rounds < 1:
            raise InvalidParameterError("n_rounds must be >= 1")
        self.classes_ = np.unique(y)
        if len(self.classes_) < 2:
            raise InvalidInputError("need at least 2 classes")
        y_enc = np.searchsorted(self.classes_, y)

        def grad(F, yb):
            return sigmoid(F) - yb

        def hess(F, yb):
            p = sigmoid(F)
            return np.maximum(p * (1.0 - p), _EPS)

        columns = [1] if len(self.classes_) == 2 else range(len(self.classes_))
        self.base_scores_ = []
        self.trees_ = []
        self.loss_history_ = []
        for col in columns:
            yb = (y_enc == col).astype(np.float64)
            p0 = np.clip(yb.mean(), 1e-6, 1.0 - 1e-6)
            base = float(np.log(p0 / (1.0 - p0)))
            F = np.full(len(X), base)
            trees = []
            losses = []
            for _ in range(self.n_rounds):
                g = grad(F, yb)
                h = hess(F, yb)
                tree = grow_newton_tree(
                    X, g, h,
                    max_depth=self.max_depth,
                    min_leaf=self.min_leaf,
                    reg_lambda=self.l2_leaf_lambda,
                )
                F = F + self.learning_rate * tree.predict_rows(X)[:, 0]
                if not np.all(np.isfinite(F)):
                    raise TrainingDivergedError("non-finite boosting margin")
                trees.append(tree)
                p = np.clip(sigmoid(F), 1e-15, 1.0 - 1e-15)
                losses.append(float(-np.mean(yb * np.log(p) + (1.0 - yb) * np.log(1.0 - p))))
            self.base_scores_.append(base)
            self.trees_.append(trees)
            self.loss_history_.append(losses)
        self.fitted_ = True
        return self

    def _margins(self, X):
        cols = []
        for base, trees in zip(self.base_scores_, self.trees_):
            F = np.full(len(X), base)
            for tree in trees:
                F = F + self.learning_rate * tree.predict_rows(X)[:, 0]
            cols.append(F)
        return np.column_stack(cols)

    def predict_proba(self, X):
        check_is_fitted(self)
        X = check_X(X)
        margins = self._margins(X)
        if len(self.classes_) == 2:
            p1 = sigmoid(margins[:, 0])
            return np.column_stack([1.0 - p1, p1])
        p = sigmoid(margins)
        return p / p.sum(axis=1, keepdims=True)

    def predict(self, X):
        return self.classes_[np.argmax(self.predict_proba(X), axis=1)]


class GradientBoostedRegressor(Estimator):
    """Newton-boosted trees on squared loss (g = F - y, h = 1); the base
    score is the target mean."""

    def __init__(
        self,
        n_rounds: int = 100,
        learning_rate: float = 0.1,
        max_depth: int = 3,
        l2_leaf_lambda: float = 1.0,
        min_leaf: int = 1,
        seed: int = 0,
    ):
        self.n_rounds = n_rounds
        self.learning_rate = learning_rate
        self.max_depth = max_depth
        self.l2_leaf_lambda = l2_leaf_lambda
        self.min_leaf = min_leaf
        self.seed = seed

    def fit(self, X, y):
        X, y = check_X_y(X, y)
        if self.n_rounds < 1:
            raise InvalidParameterError("n_rounds must be >= 1")
        y = y.astype(np.float64)
        self.base_score_ = float(y.mean())
        F = np.full(len(X), self.base_score_)
        ones = np.ones(len(X))
        self.trees_ = []
        self.loss_history_ = []
        for _ in range(self.n_rounds):
            g = F - y
            tree = grow_newton_tree(
                X, g, ones,
                max_depth=self.max_depth,
                min_leaf=self.min_leaf,
                reg_lambda=self.l2_leaf_lambda,
            )
            F = F + self.learning_rate * tree.predict_rows(X)[:, 0]
            if not np.all(np.isfinite(F)):
                raise TrainingDivergedError("non-finite boosting margin")
            self.trees_.append(tree)
            self.loss_history_.append(float(np.mean((F - y) ** 2)))
        self.fitted_ = True
        return self

    def predict(self, X):
        check_is_fitted(self)
        X = check_X(X)
        F = np.full(len(X), self.base_score_)
        for tree in self.trees_:
            F = F + self.learning_rate * tree.predict_rows(X)[:, 0]
        return F
