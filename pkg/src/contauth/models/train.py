"""Family dispatch for training, plus importances and persistence."""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from ..errors import ValidationError
from ..pipeline.dataset import LabeledDataset
from ..pipeline.sequences import SequenceDataset
from .base import TrainedModel, check_training_matrix, encode_labels
from .forest import RandomForestModel, fit_random_forest
from .gbt import GbtModel, fit_gbt
from .knn import KnnModel, fit_knn
from .lstm import LstmModel, fit_lstm
from .mlp import MlpModel, fit_mlp
from .naive_bayes import NaiveBayesModel, fit_naive_bayes
from .spec import ModelSpec

MODEL_FORMAT_VERSION = 1

_FLAT_FITTERS = {
    "naive_bayes": fit_naive_bayes,
    "knn": fit_knn,
    "random_forest": fit_random_forest,
    "gbt": fit_gbt,
}

_MODEL_CLASSES = {
    "naive_bayes": NaiveBayesModel,
    "knn": KnnModel,
    "random_forest": RandomForestModel,
    "gbt": GbtModel,
    "mlp": MlpModel,
    "lstm": LstmModel,
}


def train(
    spec: ModelSpec,
    train_data: LabeledDataset | SequenceDataset,
    validation: LabeledDataset | SequenceDataset | None = None,
) -> TrainedModel:
    """Train one model; the data kind must match the family."""
    if spec.family == "lstm":
        if not isinstance(train_data, SequenceDataset):
            raise ValidationError("lstm needs a sequence dataset", field="train")
        if validation is not None and not isinstance(validation, SequenceDataset):
            raise ValidationError("lstm validation must be a sequence dataset", field="validation")
        return fit_lstm(spec, train_data, validation)

    if not isinstance(train_data, LabeledDataset):
        raise ValidationError(f"{spec.family} needs a flat dataset", field="train")
    classes = train_data.classes()
    if len(classes) < 2:
        raise ValidationError("need at least two classes", field="train")
    X = check_training_matrix(train_data.rows)
    codes = encode_labels(train_data.labels, classes)

    if spec.family == "mlp":
        val = None
        if validation is not None and validation.n_rows > 0:
            val = (validation.rows, encode_labels(validation.labels, classes))
        return fit_mlp(spec, X, codes, classes, train_data.feature_names, val)
    fitter = _FLAT_FITTERS[spec.family]
    return fitter(spec, X, codes, classes, train_data.feature_names)


def feature_importances(model: TrainedModel) -> dict[str, float]:
    """Normalized importance per feature; trees only.

    Forests report mean impurity decrease; boosted trees report total split
    gain.
    """
    if not isinstance(model, (RandomForestModel, GbtModel)):
        raise ValidationError(
            f"importances unsupported for family {model.family!r}", field="model"
        )
    weights = model.importance_weights()
    total = weights.sum()
    if total > 0:
        weights = weights / total
    names = model.feature_names or [f"f{j}" for j in range(len(weights))]
    return {name: float(w) for name, w in zip(names, weights)}


def save_model(model: TrainedModel, path: str | Path) -> None:
    doc = {
        "format_version": MODEL_FORMAT_VERSION,
        "family": model.family,
        "spec": model.spec.to_dict(),
        "classes": model.classes,
        "feature_names": model.feature_names,
        "training_report": _jsonable(model.training_report),
        "params": model.params_dict(),
    }
    Path(path).write_text(json.dumps(doc))


def load_model(path: str | Path) -> TrainedModel:
    doc = json.loads(Path(path).read_text())
    version = doc.get("format_version")
    if version != MODEL_FORMAT_VERSION:
        raise ValidationError(f"unsupported model format {version!r}", field="format_version")
    family = doc["family"]
    cls = _MODEL_CLASSES.get(family)
    if cls is None:
        raise ValidationError(f"unknown family {family!r}", field="family")
    spec = ModelSpec.from_dict(doc["spec"])
    model = cls.from_params(spec, doc["classes"], doc["feature_names"], doc["params"])
    model.training_report = doc.get("training_report", {})
    return model


def _jsonable(value):
    if isinstance(value, dict):
        return {k: _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (np.floating,)):
        return float(value)
    if isinstance(value, np.ndarray):
        return value.tolist()
    return value
