"""CART-style trees: Gini classification trees and second-order regression
trees for boosting.

Split search is exact: every midpoint between consecutive distinct sorted
values of every candidate feature is scored. Ties are broken towards the
lowest feature index and then the lowest threshold by scanning features in
order and replacing the incumbent only on strict improvement.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

_MIN_DECREASE = 1e-12


@dataclass
class TreeNode:
    feature: int = -1
    threshold: float = 0.0
    left: "TreeNode | None" = None
    right: "TreeNode | None" = None
    value: np.ndarray | None = None  # leaf payload

    @property
    def is_leaf(self) -> bool:
        return self.left is None

    def to_dict(self) -> dict:
        if self.is_leaf:
            return {"v": np.asarray(self.value).tolist()}
        return {
            "f": int(self.feature),
            "t": float(self.threshold),
            "l": self.left.to_dict(),
            "r": self.right.to_dict(),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "TreeNode":
        if "v" in d:
            return cls(value=np.asarray(d["v"], dtype=np.float64))
        return cls(
            feature=d["f"],
            threshold=d["t"],
            left=cls.from_dict(d["l"]),
            right=cls.from_dict(d["r"]),
        )


def _route(node: TreeNode, X: np.ndarray, out: np.ndarray, idx: np.ndarray) -> None:
    if node.is_leaf:
        out[idx] = node.value
        return
    go_left = X[idx, node.feature] <= node.threshold
    _route(node.left, X, out, idx[go_left])
    _route(node.right, X, out, idx[~go_left])


def best_gini_split(X: np.ndarray, codes: np.ndarray, n_classes: int):
    """Best (feature, threshold, impurity_decrease) or None.

    Impurity decrease is the unweighted parent Gini minus the child-size
    weighted mean of child Ginis.
    """
    n = X.shape[0]
    counts = np.bincount(codes, minlength=n_classes).astype(np.float64)
    parent_gini = 1.0 - np.sum((counts / n) ** 2)
    if parent_gini <= 0.0:
        return None

    onehot = np.zeros((n, n_classes))
    onehot[np.arange(n), codes] = 1.0

    best = None
    for j in range(X.shape[1]):
        v = X[:, j]
        order = np.argsort(v, kind="stable")
        sv = v[order]
        cand = np.nonzero(sv[:-1] < sv[1:])[0]
        if cand.size == 0:
            continue
        left_counts = onehot[order].cumsum(axis=0)[cand]
        left_n = (cand + 1).astype(np.float64)
        right_n = n - left_n
        right_counts = counts - left_counts
        gini_l = 1.0 - np.sum((left_counts / left_n[:, None]) ** 2, axis=1)
        gini_r = 1.0 - np.sum((right_counts / right_n[:, None]) ** 2, axis=1)
        decrease = parent_gini - (left_n * gini_l + right_n * gini_r) / n
        k = int(np.argmax(decrease))
        if decrease[k] > _MIN_DECREASE and (best is None or decrease[k] > best[2]):
            thr = (sv[cand[k]] + sv[cand[k] + 1]) / 2.0
            best = (j, float(thr), float(decrease[k]))
    return best


class ClassificationTree:
    """Gini CART tree; leaves hold class counts."""

    def __init__(self, n_classes: int, max_depth: int | None = None, min_samples_split: int = 2):
        self.n_classes = n_classes
        self.max_depth = max_depth
        self.min_samples_split = min_samples_split
        self.root: TreeNode | None = None
        self._importance: np.ndarray | None = None

    def fit(self, X: np.ndarray, codes: np.ndarray) -> "ClassificationTree":
        X = np.asarray(X, dtype=np.float64)
        self._importance = np.zeros(X.shape[1])
        self._n_total = X.shape[0]
        self.root = self._grow(X, codes, depth=0)
        return self

    def _leaf(self, codes: np.ndarray) -> TreeNode:
        return TreeNode(value=np.bincount(codes, minlength=self.n_classes).astype(np.float64))

    def _grow(self, X: np.ndarray, codes: np.ndarray, depth: int) -> TreeNode:
        n = X.shape[0]
        if (
            n < self.min_samples_split
            or (self.max_depth is not None and depth >= self.max_depth)
        ):
            return self._leaf(codes)
        split = best_gini_split(X, codes, self.n_classes)
        if split is None:
            return self._leaf(codes)
        j, thr, decrease = split
        self._importance[j] += (n / self._n_total) * decrease
        go_left = X[:, j] <= thr
        node = TreeNode(feature=j, threshold=thr)
        node.left = self._grow(X[go_left], codes[go_left], depth + 1)
        node.right = self._grow(X[~go_left], codes[~go_left], depth + 1)
        return node

    def predict_counts(self, X: np.ndarray) -> np.ndarray:
        X = np.asarray(X, dtype=np.float64)
        out = np.zeros((X.shape[0], self.n_classes))
        _route(self.root, X, out, np.arange(X.shape[0]))
        return out

    def predict_codes(self, X: np.ndarray) -> np.ndarray:
        return np.argmax(self.predict_counts(X), axis=1)

    @property
    def importances(self) -> np.ndarray:
        return self._importance


def best_gain_split(
    X: np.ndarray,
    grad: np.ndarray,
    hess: np.ndarray,
    reg_lambda: float,
    gamma: float,
    min_child_weight: float,
    columns: np.ndarray | None = None,
):
    """Best (feature, threshold, gain) by the second-order objective, or None."""
    G, H = float(grad.sum()), float(hess.sum())
    base = G * G / (H + reg_lambda)
    cols = range(X.shape[1]) if columns is None else columns
    best = None
    for j in cols:
        v = X[:, j]
        order = np.argsort(v, kind="stable")
        sv = v[order]
        cand = np.nonzero(sv[:-1] < sv[1:])[0]
        if cand.size == 0:
            continue
        gl = grad[order].cumsum()[cand]
        hl = hess[order].cumsum()[cand]
        gr, hr = G - gl, H - hl
        gain = 0.5 * (gl * gl / (hl + reg_lambda) + gr * gr / (hr + reg_lambda) - base) - gamma
        ok = (hl >= min_child_weight) & (hr >= min_child_weight)
        if not ok.any():
            continue
        gain = np.where(ok, gain, -np.inf)
        k = int(np.argmax(gain))
        if gain[k] > 0 and (best is None or gain[k] > best[2]):
            thr = (sv[cand[k]] + sv[cand[k] + 1]) / 2.0
            best = (int(j), float(thr), float(gain[k]))
    return best


class RegressionTree:
    """Gradient/hessian regression tree with shrinkage-free raw leaf weights."""

    def __init__(
        self,
        max_depth: int,
        reg_lambda: float = 1.0,
        gamma: float = 0.0,
        min_child_weight: float = 1.0,
    ):
        self.max_depth = max_depth
        self.reg_lambda = reg_lambda
        self.gamma = gamma
        self.min_child_weight = min_child_weight
        self.root: TreeNode | None = None
        self._importance: np.ndarray | None = None

    def fit(
        self, X: np.ndarray, grad: np.ndarray, hess: np.ndarray, columns: np.ndarray | None = None
    ) -> "RegressionTree":
        X = np.asarray(X, dtype=np.float64)
        self._importance = np.zeros(X.shape[1])
        self.root = self._grow(X, grad, hess, depth=0, columns=columns)
        return self

    def _leaf(self, grad: np.ndarray, hess: np.ndarray) -> TreeNode:
        w = -grad.sum() / (hess.sum() + self.reg_lambda)
        return TreeNode(value=np.array([w]))

    def _grow(self, X, grad, hess, depth, columns) -> TreeNode:
        if depth >= self.max_depth or X.shape[0] < 2:
            return self._leaf(grad, hess)
        split = best_gain_split(
            X, grad, hess, self.reg_lambda, self.gamma, self.min_child_weight, columns
        )
        if split is None:
            return self._leaf(grad, hess)
        j, thr, gain = split
        self._importance[j] += gain
        go_left = X[:, j] <= thr
        node = TreeNode(feature=j, threshold=thr)
        node.left = self._grow(X[go_left], grad[go_left], hess[go_left], depth + 1, columns)
        node.right = self._grow(X[~go_left], grad[~go_left], hess[~go_left], depth + 1, columns)
        return node

    def predict(self, X: np.ndarray) -> np.ndarray:
        X = np.asarray(X, dtype=np.float64)
        out = np.zeros((X.shape[0], 1))
        _route(self.root, X, out, np.arange(X.shape[0]))
        return out[:, 0]

    @property
    def importances(self) -> np.ndarray:
        return self._importance
