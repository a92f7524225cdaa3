"""Gaussian naive Bayes with a variance floor."""

from __future__ import annotations

import numpy as np

from .base import TrainedModel, check_training_matrix
from .spec import ModelSpec

VAR_FLOOR = 1e-9


class NaiveBayesModel(TrainedModel):
    family = "naive_bayes"

    def __init__(self, spec, classes, feature_names, means, variances, log_priors):
        super().__init__(spec, classes, feature_names)
        self.means = means  # (K, d)
        self.variances = variances  # (K, d), floored
        self.log_priors = log_priors  # (K,)

    def _raw_scores(self, X: np.ndarray) -> np.ndarray:
        # joint log likelihood, normalized through a stable softmax
        log_like = np.empty((X.shape[0], len(self.classes)))
        for k in range(len(self.classes)):
            diff = X - self.means[k]
            log_like[:, k] = self.log_priors[k] - 0.5 * np.sum(
                np.log(2 * np.pi * self.variances[k]) + diff * diff / self.variances[k], axis=1
            )
        shifted = log_like - log_like.max(axis=1, keepdims=True)
        return np.exp(shifted)

    def params_dict(self) -> dict:
        return {
            "means": self.means.tolist(),
            "variances": self.variances.tolist(),
            "log_priors": self.log_priors.tolist(),
        }

    @classmethod
    def from_params(cls, spec, classes, feature_names, params) -> "NaiveBayesModel":
        return cls(
            spec,
            classes,
            feature_names,
            np.asarray(params["means"], dtype=np.float64),
            np.asarray(params["variances"], dtype=np.float64),
            np.asarray(params["log_priors"], dtype=np.float64),
        )


def fit_naive_bayes(
    spec: ModelSpec, X: np.ndarray, codes: np.ndarray, classes: list[str], feature_names
) -> NaiveBayesModel:
    X = check_training_matrix(X)
    K = len(classes)
    means = np.zeros((K, X.shape[1]))
    variances = np.zeros((K, X.shape[1]))
    log_priors = np.zeros(K)
    for k in range(K):
        rows = X[codes == k]
        means[k] = rows.mean(axis=0)
        variances[k] = np.maximum(rows.var(axis=0), VAR_FLOOR)
        log_priors[k] = np.log(rows.shape[0] / X.shape[0])
    model = NaiveBayesModel(spec, classes, feature_names, means, variances, log_priors)
    model.training_report = {"n_train": int(X.shape[0])}
    return model
