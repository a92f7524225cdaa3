"""Random forest: bootstrap-sampled Gini CART trees with majority vote."""

from __future__ import annotations

import numpy as np

from .base import TrainedModel, check_training_matrix
from .spec import ModelSpec
from .tree import ClassificationTree, TreeNode


class RandomForestModel(TrainedModel):
    family = "random_forest"

    def __init__(self, spec, classes, feature_names, trees, importances):
        super().__init__(spec, classes, feature_names)
        self.trees = trees
        self._importances = importances

    def _raw_scores(self, X: np.ndarray) -> np.ndarray:
        K = len(self.classes)
        votes = np.zeros((X.shape[0], K))
        for tree in self.trees:
            codes = tree.predict_codes(X)
            votes[np.arange(X.shape[0]), codes] += 1.0
        return votes

    def importance_weights(self) -> np.ndarray:
        return self._importances

    def params_dict(self) -> dict:
        return {
            "trees": [t.root.to_dict() for t in self.trees],
            "importances": self._importances.tolist(),
        }

    @classmethod
    def from_params(cls, spec, classes, feature_names, params) -> "RandomForestModel":
        trees = []
        for node_dict in params["trees"]:
            tree = ClassificationTree(n_classes=len(classes))
            tree.root = TreeNode.from_dict(node_dict)
            trees.append(tree)
        return cls(spec, classes, feature_names, trees, np.asarray(params["importances"]))


def fit_random_forest(
    spec: ModelSpec, X: np.ndarray, codes: np.ndarray, classes: list[str], feature_names
) -> RandomForestModel:
    X = check_training_matrix(X)
    n_trees = int(spec.get("number_of_trees"))
    max_depth = spec.get("max_depth")
    bootstrap = bool(spec.get("bootstrap"))
    K = len(classes)

    seeds = np.random.SeedSequence(spec.seed & 0xFFFFFFFFFFFFFFFF).spawn(n_trees)
    trees = []
    importance_sum = np.zeros(X.shape[1])
    for t in range(n_trees):
        rng = np.random.default_rng(seeds[t])
        if bootstrap:
            idx = rng.integers(0, X.shape[0], size=X.shape[0])
        else:
            idx = np.arange(X.shape[0])
        tree = ClassificationTree(K, max_depth=max_depth).fit(X[idx], codes[idx])
        trees.append(tree)
        importance_sum += tree.importances

    total = importance_sum.sum()
    importances = importance_sum / total if total > 0 else importance_sum
    model = RandomForestModel(spec, classes, feature_names, trees, importances)
    model.training_report = {"n_trees": n_trees, "n_train": int(X.shape[0])}
    return model
