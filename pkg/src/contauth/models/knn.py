"""k nearest neighbours on standardized features.

Votes are class counts among the k nearest by Euclidean distance; a tie
between classes is broken by the nearest member of each tied class, then by
class order.
"""

from __future__ import annotations

import numpy as np

from .base import TrainedModel, check_training_matrix
from .spec import ModelSpec

_STD_FLOOR = 1e-12


class KnnModel(TrainedModel):
    family = "knn"

    def __init__(self, spec, classes, feature_names, X, codes, mean, std, k):
        super().__init__(spec, classes, feature_names)
        self.X = X  # standardized training matrix
        self.codes = codes
        self.mean = mean
        self.std = std
        self.k = int(k)

    def _raw_scores(self, X: np.ndarray) -> np.ndarray:
        Z = (X - self.mean) / self.std
        K = len(self.classes)
        out = np.zeros((Z.shape[0], K))
        k = min(self.k, self.X.shape[0])
        for i in range(Z.shape[0]):
            d2 = np.sum((self.X - Z[i]) ** 2, axis=1)
            order = np.argsort(d2, kind="stable")[:k]
            votes = np.bincount(self.codes[order], minlength=K).astype(np.float64)
            top = votes.max()
            tied = np.nonzero(votes == top)[0]
            if len(tied) > 1:
                # nearest member of a tied class wins
                nearest = {c: np.inf for c in tied}
                for idx in order:
                    c = self.codes[idx]
                    if c in nearest and d2[idx] < nearest[c]:
                        nearest[c] = d2[idx]
                winner = min(tied, key=lambda c: (nearest[c], c))
                votes[winner] += 0.5  # strictly break the vote tie
            out[i] = votes
        return out

    def params_dict(self) -> dict:
        return {
            "X": self.X.tolist(),
            "codes": self.codes.tolist(),
            "mean": self.mean.tolist(),
            "std": self.std.tolist(),
            "k": self.k,
        }

    @classmethod
    def from_params(cls, spec, classes, feature_names, params) -> "KnnModel":
        return cls(
            spec,
            classes,
            feature_names,
            np.asarray(params["X"], dtype=np.float64),
            np.asarray(params["codes"], dtype=np.int64),
            np.asarray(params["mean"], dtype=np.float64),
            np.asarray(params["std"], dtype=np.float64),
            params["k"],
        )


def fit_knn(
    spec: ModelSpec, X: np.ndarray, codes: np.ndarray, classes: list[str], feature_names
) -> KnnModel:
    X = check_training_matrix(X)
    mean = X.mean(axis=0)
    std = np.maximum(X.std(axis=0), _STD_FLOOR)
    model = KnnModel(spec, classes, feature_names, (X - mean) / std, codes, mean, std, int(spec.get("k")))
    model.training_report = {"n_train": int(X.shape[0])}
    return model
