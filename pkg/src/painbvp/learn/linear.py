"""Linear model families: logistic regression, linear SVM/SVR, least squares.

The logistic loss/gradient pair is exposed at module level so tests can
check the analytic gradient against central finite differences.
"""

from __future__ import annotations

import numpy as np

from ..errors import InvalidInputError
from .base import Estimator, check_X, check_X_y, check_is_fitted, softmax

__all__ = [
    "logistic_loss_grad",
    "LogisticRegressionClassifier",
    "LinearSVMClassifier",
    "LinearRegressor",
    "LinearSVR",
]


def logistic_loss_grad(params: np.ndarray, X: np.ndarray, y_onehot: np.ndarray, l2_lambda: float):
    """Multinomial logistic loss and gradient.

    ``params`` is the flattened (d+1, K) matrix whose last row is the
    unpenalized bias; loss = mean NLL + lambda * ||W||^2.
    """
    n, d = X.shape
    k = y_onehot.shape[1]
    mat = params.reshape(d + 1, k)
    W, b = mat[:-1], mat[-1]
    probs = softmax(X @ W + b, axis=1)
    nll = -float(np.mean(np.log(np.maximum(probs[y_onehot.astype(bool)], 1e-300))))
    loss = nll + l2_lambda * float(np.sum(W * W))
    diff = (probs - y_onehot) / n
    grad = np.vstack([X.T @ diff + 2.0 * l2_lambda * W, diff.sum(axis=0)])
    return loss, grad.ravel()


def _logistic_hessian(params, X, y_onehot, l2_lambda):
    """Exact Hessian of the multinomial logistic objective, (d+1)K square.

    Parameter layout matches ``logistic_loss_grad``: row-major over the
    (d+1, K) matrix, bias row unpenalized.
    """
    n, d = X.shape
    k = y_onehot.shape[1]
    mat = params.reshape(d + 1, k)
    probs = softmax(X @ mat[:-1] + mat[-1], axis=1)
    Xb = np.hstack([X, np.ones((n, 1))])
    dim = (d + 1) * k
    H = np.empty((dim, dim))
    for c in range(k):
        for c2 in range(c, k):
            w = probs[:, c] * ((c == c2) - probs[:, c2]) / n
            block = Xb.T @ (Xb * w[:, None])
            H[c::k, c2::k] = block
            if c2 != c:
                H[c2::k, c::k] = block
    ridge = np.full(dim, 2.0 * l2_lambda)
    ridge[d * k :] = 0.0  # bias entries unpenalized
    H[np.diag_indices(dim)] += ridge
    return H


class LogisticRegressionClassifier(Estimator):
    """Multinomial logistic regression with an L2 coefficient penalty.

    Trained by damped Newton steps with Armijo backtracking; this handles
    the extreme curvature ratio between a heavily penalized weight block
    and the free bias.
    """

    def __init__(self, l2_lambda: float = 1.0, max_iter: int = 100, tol: float = 1e-7):
        self.l2_lambda = l2_lambda
        self.max_iter = max_iter
        self.tol = tol

    def fit(self, X, y):
        X, y = check_X_y(X, y)
        self.classes_ = np.unique(y)
        if len(self.classes_) < 2:
            raise InvalidInputError("need at least 2 classes")
        y_enc = np.searchsorted(self.classes_, y)
        onehot = np.eye(len(self.classes_))[y_enc]
        params = np.zeros((X.shape[1] + 1) * len(self.classes_))
        loss, grad = logistic_loss_grad(params, X, onehot, self.l2_lambda)
        self.converged_ = False
        for _ in range(self.max_iter):
            if np.max(np.abs(grad)) < self.tol:
                self.converged_ = True
                break
            H = _logistic_hessian(params, X, onehot, self.l2_lambda)
            # softmax over-parameterization leaves a flat direction; damp it
            H[np.diag_indices_from(H)] += 1e-10
            try:
                direction = -np.linalg.solve(H, grad)
            except np.linalg.LinAlgError:
                direction = -grad
            slope = float(grad @ direction)
            if slope >= 0:
                direction = -grad
                slope = -float(grad @ grad)
            step = 1.0
            while step > 1e-18:
                candidate = params + step * direction
                new_loss, new_grad = logistic_loss_grad(candidate, X, onehot, self.l2_lambda)
                if new_loss <= loss + 1e-4 * step * slope:
                    params, loss, grad = candidate, new_loss, new_grad
                    break
                step *= 0.5
            else:
                break
        mat = params.reshape(X.shape[1] + 1, len(self.classes_))
        self.coef_ = mat[:-1]
        self.intercept_ = mat[-1]
        self.fitted_ = True
        return self

    def predict_proba(self, X):
        check_is_fitted(self)
        X = check_X(X)
        return softmax(X @ self.coef_ + self.intercept_, axis=1)

    def predict(self, X):
        return self.classes_[np.argmax(self.predict_proba(X), axis=1)]


def _svm_objective(w, b, X, y_signed, C):
    margins = 1.0 - y_signed * (X @ w + b)
    return float(np.mean(np.maximum(margins, 0.0)) + (w @ w) / (2.0 * C))


class LinearSVMClassifier(Estimator):
    """One-vs-rest linear SVM, trained by seeded stochastic subgradient
    descent on mean hinge loss + ||w||^2 / (2C).

    Probabilities come from a softmax over the per-class decision values;
    a calibration-free convention, needed only for ROC-AUC reporting.
    """

    def __init__(self, C: float = 1.0, epochs: int = 100, seed: int = 0):
        self.C = C
        self.epochs = epochs
        self.seed = seed

    def _fit_binary(self, X, y_signed, rng):
        n, d = X.shape
        lam = 1.0 / self.C
        w = np.zeros(d)
        b = 0.0
        history = []
        t = 0
        for _ in range(self.epochs):
            for i in rng.permutation(n):
                t += 1
                eta = 1.0 / (lam * (t + n))  # gentler start than classic 1/(lam t)
                w *= 1.0 - eta * lam
                if y_signed[i] * (X[i] @ w + b) < 1.0:
                    w += eta * y_signed[i] * X[i]
                    b += eta * y_signed[i]
            history.append(_svm_objective(w, b, X, y_signed, self.C))
        return w, b, history

    def fit(self, X, y):
        X, y = check_X_y(X, y)
        self.classes_ = np.unique(y)
        if len(self.classes_) < 2:
            raise InvalidInputError("need at least 2 classes")
        rng = np.random.default_rng(self.seed)
        d = X.shape[1]
        self.coef_ = np.zeros((d, len(self.classes_)))
        self.intercept_ = np.zeros(len(self.classes_))
        self.objective_history_ = []
        for c_idx, cls in enumerate(self.classes_):
            y_signed = np.where(y == cls, 1.0, -1.0)
            w, b, history = self._fit_binary(X, y_signed, rng)
            self.coef_[:, c_idx] = w
            self.intercept_[c_idx] = b
            self.objective_history_.append(history)
        self.fitted_ = True
        return self

    def decision_function(self, X):
        check_is_fitted(self)
        X = check_X(X)
        scores = X @ self.coef_ + self.intercept_
        if len(self.classes_) == 2:
            # one-vs-rest on two classes: antisymmetric scores by construction
            return scores
        return scores

    def predict_proba(self, X):
        return softmax(self.decision_function(X), axis=1)

    def predict(self, X):
        return self.classes_[np.argmax(self.decision_function(X), axis=1)]


class ConstantRegressor(Estimator):
    """Predicts a fixed value everywhere (the naive benchmark)."""

    def __init__(self, value: float = 5.0):
        self.value = value

    def fit(self, X, y):
        check_X_y(X, y)
        self.fitted_ = True
        return self

    def predict(self, X):
        check_is_fitted(self)
        X = check_X(X)
        return np.full(len(X), float(self.value))


class LinearRegressor(Estimator):
    """Ordinary least squares via lstsq (no regularization)."""

    def __init__(self):
        pass

    def fit(self, X, y):
        X, y = check_X_y(X, y)
        A = np.hstack([X, np.ones((len(X), 1))])
        coefs, *_ = np.linalg.lstsq(A, y.astype(np.float64), rcond=None)
        self.coef_ = coefs[:-1]
        self.intercept_ = float(coefs[-1])
        self.fitted_ = True
        return self

    def predict(self, X):
        check_is_fitted(self)
        X = check_X(X)
        return X @ self.coef_ + self.intercept_


class LinearSVR(Estimator):
    """Linear epsilon-insensitive support vector regression by seeded
    stochastic subgradient descent on mean eps-loss + ||w||^2 / (2C)."""

    def __init__(self, C: float = 1.0, epsilon: float = 0.1, epochs: int = 100, seed: int = 0):
        self.C = C
        self.epsilon = epsilon
        self.epochs = epochs
        self.seed = seed

    def fit(self, X, y):
        X, y = check_X_y(X, y)
        y = y.astype(np.float64)
        rng = np.random.default_rng(self.seed)
        n, d = X.shape
        lam = 1.0 / self.C
        w = np.zeros(d)
        b = 0.0
        t = 0
        self.objective_history_ = []
        for _ in range(self.epochs):
            for i in rng.permutation(n):
                t += 1
                eta = 1.0 / (lam * (t + n))
                w *= 1.0 - eta * lam
                resid = X[i] @ w + b - y[i]
                if resid > self.epsilon:
                    w -= eta * X[i]
                    b -= eta
                elif resid < -self.epsilon:
                    w += eta * X[i]
                    b += eta
            losses = np.maximum(np.abs(X @ w + b - y) - self.epsilon, 0.0)
            self.objective_history_.append(float(losses.mean() + (w @ w) / (2.0 * self.C)))
        self.coef_ = w
        self.intercept_ = b
        self.fitted_ = True
        return self

    def predict(self, X):
        check_is_fitted(self)
        X = check_X(X)
        return X @ self.coef_ + self.intercept_
