"""Decision-tree builders shared by the forests and boosters.

Split predicate is ``x[feature] <= threshold`` with the threshold set to an
actual training value (the largest value routed left).  That choice makes
tree predictions invariant under strictly monotone per-feature transforms
applied consistently to train and test data, which midpoint thresholds
would not guarantee.
"""

from __future__ import annotations

import numpy as np

__all__ = ["TreeNode", "grow_tree", "grow_newton_tree", "tree_to_dict", "tree_from_dict"]


class TreeNode:
    """Binary tree node; leaves carry ``value`` (class weights or a scalar)."""

    __slots__ = ("feature", "threshold", "left", "right", "value")

    def __init__(self, value=None, feature=None, threshold=None, left=None, right=None):
        self.value = value
        self.feature = feature
        self.threshold = threshold
        self.left = left
        self.right = right

    @property
    def is_leaf(self) -> bool:
        return self.feature is None

    def predict_rows(self, X: np.ndarray) -> np.ndarray:
        """Leaf values for every row, vectorized by recursive partitioning."""
        if self.is_leaf:
            value = np.asarray(self.value, dtype=np.float64)
            return np.broadcast_to(value, (len(X),) + value.shape).copy()
        mask = X[:, self.feature] <= self.threshold
        out = None
        for node, rows in ((self.left, mask), (self.right, ~mask)):
            if not rows.any():
                continue
            sub = node.predict_rows(X[rows])
            if out is None:
                out = np.empty((len(X),) + sub.shape[1:], dtype=np.float64)
            out[rows] = sub
        return out


def _weighted_gini(class_w: np.ndarray) -> float:
    total = class_w.sum()
    if total <= 0:
        return 0.0
    p = class_w / total
    return 1.0 - float(p @ p)


def _leaf_value(y_enc, w, n_classes, task):
    if task == "classification":
        counts = np.bincount(y_enc, weights=w, minlength=n_classes)
        total = counts.sum()
        return counts / total if total > 0 else np.full(n_classes, 1.0 / n_classes)
    return np.array([np.average(y_enc, weights=w)])


def _node_impurity(y_enc, w, n_classes, task):
    if task == "classification":
        return _weighted_gini(np.bincount(y_enc, weights=w, minlength=n_classes))
    mean = np.average(y_enc, weights=w)
    return float(np.average((y_enc - mean) ** 2, weights=w))


def _best_split_sorted(values, y_enc, w, n_classes, min_leaf, task):
    """Best (threshold, gain, child impurities) scanning sorted cut points.

    Returns None when no valid split exists for this feature.
    """
    order = np.argsort(values, kind="stable")
    v = values[order]
    if v[0] == v[-1]:
        return None
    yw = y_enc[order]
    ww = w[order]
    n = len(v)
    cuts = np.flatnonzero(v[:-1] != v[1:]) + 1  # split between i-1 and i
    cuts = cuts[(cuts >= min_leaf) & (cuts <= n - min_leaf)]
    if len(cuts) == 0:
        return None
    if task == "classification":
        onehot = np.zeros((n, n_classes))
        onehot[np.arange(n), yw] = ww
        cum = np.cumsum(onehot, axis=0)
        left = cum[cuts - 1]
        total = cum[-1]
        right = total - left
        wl = left.sum(axis=1)
        wr = right.sum(axis=1)
        gl = 1.0 - np.einsum("ij,ij->i", left, left) / np.maximum(wl, 1e-300) ** 2
        gr = 1.0 - np.einsum("ij,ij->i", right, right) / np.maximum(wr, 1e-300) ** 2
        parent = _weighted_gini(total)
    else:
        cw = np.cumsum(ww)
        cwy = np.cumsum(ww * yw)
        cwy2 = np.cumsum(ww * yw * yw)
        wl = cw[cuts - 1]
        wr = cw[-1] - wl
        sl = cwy[cuts - 1]
        sr = cwy[-1] - sl
        ql = cwy2[cuts - 1]
        qr = cwy2[-1] - ql
        gl = ql / wl - (sl / wl) ** 2
        gr = qr / wr - (sr / wr) ** 2
        parent = cwy2[-1] / cw[-1] - (cwy[-1] / cw[-1]) ** 2
    w_total = wl + wr
    gains = parent - (wl * gl + wr * gr) / w_total
    best = int(np.argmax(gains))
    if gains[best] <= 1e-12:
        return None
    cut = cuts[best]
    return float(v[cut - 1]), float(gains[best]), order[:cut], order[cut:]


def _random_split(values, y_enc, w, n_classes, min_leaf, task, rng):
    lo, hi = values.min(), values.max()
    if lo == hi:
        return None
    threshold = rng.uniform(lo, hi)
    mask = values <= threshold
    nl = int(mask.sum())
    if nl < min_leaf or len(values) - nl < min_leaf:
        return None
    parent = _node_impurity(y_enc, w, n_classes, task)
    il = _node_impurity(y_enc[mask], w[mask], n_classes, task)
    ir = _node_impurity(y_enc[~mask], w[~mask], n_classes, task)
    wl = w[mask].sum()
    wr = w[~mask].sum()
    gain = parent - (wl * il + wr * ir) / (wl + wr)
    if gain <= 1e-12:
        return None
    left_idx = np.flatnonzero(mask)
    right_idx = np.flatnonzero(~mask)
    return float(threshold), float(gain), left_idx, right_idx


def grow_tree(
    X,
    y_enc,
    *,
    task: str,
    n_classes: int = 0,
    max_depth: int | None = None,
    min_leaf: int = 1,
    max_features: int | None = None,
    splitter: str = "best",
    sample_weight=None,
    rng=None,
    importances: np.ndarray | None = None,
    total_weight: float | None = None,
):
    """Grow an impurity-based tree (Gini for classification, variance for
    regression).  ``importances`` accumulates weighted impurity decreases
    per feature when provided."""
    X = np.asarray(X, dtype=np.float64)
    w = np.ones(len(X)) if sample_weight is None else np.asarray(sample_weight, dtype=np.float64)
    if total_weight is None:
        total_weight = float(w.sum())
    n_features = X.shape[1]
    k = n_features if max_features is None else min(max_features, n_features)

    def build(idx, depth):
        ys = y_enc[idx]
        ws = w[idx]
        node_value = _leaf_value(ys, ws, n_classes, task)
        if (
            (max_depth is not None and depth >= max_depth)
            or len(idx) < 2 * min_leaf
            or (task == "classification" and len(np.unique(ys)) == 1)
            or (task == "regression" and np.all(ys == ys[0]))
        ):
            return TreeNode(value=node_value)
        feats = np.arange(n_features) if k == n_features else rng.choice(n_features, k, replace=False)
        best = None
        for f in feats:
            values = X[idx, f]
            if splitter == "random":
                found = _random_split(values, ys, ws, n_classes, min_leaf, task, rng)
            else:
                found = _best_split_sorted(values, ys, ws, n_classes, min_leaf, task)
            if found is not None and (best is None or found[1] > best[1]):
                best = (f, found[1], found[0], found[2], found[3])
        if best is None:
            return TreeNode(value=node_value)
        f, gain, threshold, left_local, right_local = best
        if importances is not None:
            importances[f] += ws.sum() / total_weight * gain
        left = build(idx[left_local], depth + 1)
        right = build(idx[right_local], depth + 1)
        return TreeNode(feature=int(f), threshold=threshold, left=left, right=right)

    return build(np.arange(len(X)), 0)


def grow_newton_tree(
    X,
    g: np.ndarray,
    h: np.ndarray,
    *,
    max_depth: int = 3,
    min_leaf: int = 1,
    reg_lambda: float = 1.0,
):
    """Second-order (gradient/hessian) regression tree.

    Leaf value is ``-G / (H + lambda)``; split gain is
    ``0.5 * (GL^2/(HL+l) + GR^2/(HR+l) - G^2/(H+l))`` and a node splits only
    when the best gain is positive.
    """
    X = np.asarray(X, dtype=np.float64)

    def score(gs, hs):
        return gs * gs / (hs + reg_lambda)

    def build(idx, depth):
        gs = float(g[idx].sum())
        hs = float(h[idx].sum())
        leaf = TreeNode(value=np.array([-gs / (hs + reg_lambda)]))
        if depth >= max_depth or len(idx) < 2 * min_leaf:
            return leaf
        base = score(gs, hs)
        best = None
        for f in range(X.shape[1]):
            values = X[idx, f]
            order = np.argsort(values, kind="stable")
            v = values[order]
            if v[0] == v[-1]:
                continue
            cg = np.cumsum(g[idx][order])
            ch = np.cumsum(h[idx][order])
            cuts = np.flatnonzero(v[:-1] != v[1:]) + 1
            cuts = cuts[(cuts >= min_leaf) & (cuts <= len(v) - min_leaf)]
            if len(cuts) == 0:
                continue
            gl = cg[cuts - 1]
            hl = ch[cuts - 1]
            gains = 0.5 * (
                score(gl, hl) + score(gs - gl, hs - hl) - base
            )
            j = int(np.argmax(gains))
            if gains[j] <= 1e-12:
                continue
            if best is None or gains[j] > best[1]:
                best = (f, float(gains[j]), float(v[cuts[j] - 1]), order[: cuts[j]], order[cuts[j] :])
        if best is None:
            return leaf
        f, _, threshold, left_local, right_local = best
        return TreeNode(
            feature=f,
            threshold=threshold,
            left=build(idx[left_local], depth + 1),
            right=build(idx[right_local], depth + 1),
        )

    return build(np.arange(len(X)), 0)


def tree_to_dict(node: TreeNode) -> dict:
    if node.is_leaf:
        return {"value": np.asarray(node.value).tolist()}
    return {
        "feature": node.feature,
        "threshold": node.threshold,
        "left": tree_to_dict(node.left),
        "right": tree_to_dict(node.right),
    }


def tree_from_dict(d: dict) -> TreeNode:
    if "value" in d:
        return TreeNode(value=np.array(d["value"], dtype=np.float64))
    return TreeNode(
        feature=int(d["feature"]),
        threshold=float(d["threshold"]),
        left=tree_from_dict(d["left"]),
        right=tree_from_dict(d["right"]),
    )
