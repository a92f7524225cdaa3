"""Trained model interface shared by all six families."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import SchemaError, ValidationError
from .spec import ModelSpec

SCORE_TOL = 1e-9


@dataclass
class Prediction:
    label: str
    scores: dict[str, float]


class TrainedModel:
    """Fitted classifier: immutable after training, safe to share for prediction."""

    family: str = ""

    def __init__(self, spec: ModelSpec, classes: list[str], feature_names: list[str] | None):
        if not classes:
            raise ValidationError("class list must be non-empty", field="classes")
        self.spec = spec
        self.classes = list(classes)
        self.feature_names = list(feature_names) if feature_names is not None else None
        self.training_report: dict = {}

    # subclasses implement scores over a 2-D batch
    def _raw_scores(self, X: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def _check_flat(self, X: np.ndarray) -> np.ndarray:
        X = np.asarray(X, dtype=np.float64)
        if X.ndim == 1:
            X = X[None, :]
        if self.feature_names is not None and X.shape[1] != len(self.feature_names):
            raise SchemaError(
                f"{self.family} expects {len(self.feature_names)} features, got {X.shape[1]}"
            )
        if np.isnan(X).any():
            raise ValidationError("NaN in prediction input", field="x")
        return X

    def predict_scores(self, X) -> np.ndarray:
        """(n, K) class scores; every row is non-negative and sums to 1."""
        X = self._check_flat(X)
        raw = self._raw_scores(X)
        return finalize_scores(raw)

    def predict(self, x) -> Prediction:
        scores = self.predict_scores(x)[0]
        label = self.classes[int(np.argmax(scores))]
        return Prediction(label, {c: float(s) for c, s in zip(self.classes, scores)})

    def predict_labels(self, X) -> list[str]:
        scores = self.predict_scores(X)
        return [self.classes[int(i)] for i in np.argmax(scores, axis=1)]

    def params_dict(self) -> dict:
        raise NotImplementedError


def finalize_scores(raw: np.ndarray) -> np.ndarray:
    raw = np.asarray(raw, dtype=np.float64)
    if not np.isfinite(raw).all():
        raise ValidationError("non-finite class scores", field="scores")
    if (raw < 0).any():
        raise ValidationError("negative class scores", field="scores")
    totals = raw.sum(axis=1, keepdims=True)
    out = np.where(totals > 0, raw / np.where(totals == 0, 1.0, totals), 1.0 / raw.shape[1])
    return out


def encode_labels(labels: list[str], classes: list[str]) -> np.ndarray:
    index = {c: i for i, c in enumerate(classes)}
    try:
        return np.array([index[l] for l in labels], dtype=np.int64)
    except KeyError as exc:
        raise ValidationError(f"label {exc} not in class list", field="labels") from exc


def check_training_matrix(X: np.ndarray) -> np.ndarray:
    X = np.asarray(X, dtype=np.float64)
    if np.isnan(X).any():
        raise ValidationError("NaN in training data", field="train")
    return X
