"""Gradient-boosted trees with the multiclass softmax objective.

Each round fits one second-order regression tree per class on the softmax
gradients/hessians; leaf weights are shrunk by the learning rate. Trees can
subsample columns (colsample_bytree) with per-tree derived seeds.
"""

from __future__ import annotations

import numpy as np

from ..errors import ValidationError
from .base import TrainedModel, check_training_matrix
from .spec import ModelSpec
from .tree import RegressionTree, TreeNode


def softmax(z: np.ndarray) -> np.ndarray:
    shifted = z - z.max(axis=1, keepdims=True)
    e = np.exp(shifted)
    return e / e.sum(axis=1, keepdims=True)


def log_loss(probs: np.ndarray, codes: np.ndarray) -> float:
    p = np.clip(probs[np.arange(len(codes)), codes], 1e-15, 1.0)
    return float(-np.mean(np.log(p)))


class GbtModel(TrainedModel):
    family = "gbt"

    def __init__(self, spec, classes, feature_names, rounds, lr, importances):
        super().__init__(spec, classes, feature_names)
        self.rounds = rounds  # list of per-class RegressionTree lists
        self.lr = lr
        self._importances = importances

    def _raw_margin(self, X: np.ndarray) -> np.ndarray:
        F = np.zeros((X.shape[0], len(self.classes)))
        for per_class in self.rounds:
            for k, tree in enumerate(per_class):
                F[:, k] += self.lr * tree.predict(X)
        return F

    def _raw_scores(self, X: np.ndarray) -> np.ndarray:
        return softmax(self._raw_margin(X))

    def importance_weights(self) -> np.ndarray:
        return self._importances

    def params_dict(self) -> dict:
        return {
            "lr": self.lr,
            "rounds": [[t.root.to_dict() for t in per_class] for per_class in self.rounds],
            "importances": self._importances.tolist(),
        }

    @classmethod
    def from_params(cls, spec, classes, feature_names, params) -> "GbtModel":
        rounds = []
        for per_class in params["rounds"]:
            trees = []
            for node_dict in per_class:
                tree = RegressionTree(max_depth=1)
                tree.root = TreeNode.from_dict(node_dict)
                trees.append(tree)
            rounds.append(trees)
        return cls(spec, classes, feature_names, rounds, params["lr"], np.asarray(params["importances"]))


def fit_gbt(
    spec: ModelSpec, X: np.ndarray, codes: np.ndarray, classes: list[str], feature_names
) -> GbtModel:
    X = check_training_matrix(X)
    n, d = X.shape
    K = len(classes)
    lr = float(spec.get("lr"))
    max_depth = int(spec.get("max_depth"))
    min_child_weight = float(spec.get("min_child_weight"))
    gamma = float(spec.get("gamma"))
    colsample = float(spec.get("colsample_bytree"))
    n_rounds = int(spec.get("n_rounds"))
    reg_lambda = float(spec.get("reg_lambda"))

    onehot = np.zeros((n, K))
    onehot[np.arange(n), codes] = 1.0
    F = np.zeros((n, K))
    rng = np.random.default_rng(spec.seed & 0xFFFFFFFFFFFFFFFF)
    n_cols = max(1, int(round(colsample * d)))

    rounds = []
    importance_sum = np.zeros(d)
    loss_curve = []
    for _ in range(n_rounds):
        probs = softmax(F)
        loss_curve.append(log_loss(probs, codes))
        grad = probs - onehot
        hess = probs * (1.0 - probs)
        per_class = []
        for k in range(K):
            columns = None
            if n_cols < d:
                columns = np.sort(rng.choice(d, size=n_cols, replace=False))
            tree = RegressionTree(
                max_depth=max_depth,
                reg_lambda=reg_lambda,
                gamma=gamma,
                min_child_weight=min_child_weight,
            ).fit(X, grad[:, k], hess[:, k], columns=columns)
            per_class.append(tree)
            importance_sum += tree.importances
            F[:, k] += lr * tree.predict(X)
        rounds.append(per_class)
    final_loss = log_loss(softmax(F), codes)
    loss_curve.append(final_loss)
    if not np.isfinite(final_loss):
        raise ValidationError("non-finite training loss", field="train")

    total = importance_sum.sum()
    importances = importance_sum / total if total > 0 else importance_sum
    model = GbtModel(spec, classes, feature_names, rounds, lr, importances)
    model.training_report = {"n_rounds": n_rounds, "loss_curve": loss_curve, "n_train": n}
    return model
