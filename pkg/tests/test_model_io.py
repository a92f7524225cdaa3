import numpy as np
import pytest

from contauth.errors import ValidationError
from contauth.models import ModelSpec, load_model, save_model, train
from contauth.pipeline import UserTimeline, build_sequences, concat_sequences
from contauth.pipeline import LabeledDataset


def blob_ds(n_per_class=30, k=3, d=4, seed=0):
    rng = np.random.default_rng(seed)
    X, labels = [], []
    for c in range(k):
        centre = rng.normal(scale=4.0, size=d)
        X.append(rng.normal(loc=centre, size=(n_per_class, d)))
        labels += [f"c{c}"] * n_per_class
    X = np.vstack(X)
    return LabeledDataset(
        [f"f{j}" for j in range(d)], X, labels, np.arange(X.shape[0], dtype=np.int64)
    )


FLAT_SPECS = [
    ModelSpec("naive_bayes"),
    ModelSpec("knn", {"k": 4}),
    ModelSpec("random_forest", {"number_of_trees": 5}, seed=2),
    ModelSpec("gbt", {"max_depth": 3, "n_rounds": 4, "lr": 0.2, "gamma": 0.0,
                      "min_child_weight": 1.0, "colsample_bytree": 1.0}, seed=2),
    ModelSpec("mlp", {"layers": 1, "neurons_per_layer": 50, "epochs": 4}, seed=2),
]


@pytest.mark.parametrize("spec", FLAT_SPECS, ids=lambda s: s.family)
def test_flat_model_roundtrip(tmp_path, spec):
    ds = blob_ds()
    model = train(spec, ds)
    path = tmp_path / "model.json"
    save_model(model, path)
    back = load_model(path)
    assert back.family == model.family
    assert back.classes == model.classes
    assert back.feature_names == model.feature_names
    assert np.allclose(back.predict_scores(ds.rows), model.predict_scores(ds.rows), atol=0)


def test_lstm_roundtrip(tmp_path):
    rng = np.random.default_rng(0)
    parts = []
    for label, offset in (("a", -2.0), ("b", 2.0)):
        tl = UserTimeline(label, 0, 20, width=5)
        for off in range(20):
            if rng.random() < 0.8:
                tl.active[off] = rng.normal(loc=offset, size=5)
        parts.append(build_sequences(tl, 3).active())
    ds = concat_sequences(parts)
    spec = ModelSpec("lstm", {"lstm_layers": 1, "nodes_per_layer": 8, "dropout": 0.0, "epochs": 3})
    model = train(spec, ds)
    path = tmp_path / "lstm.json"
    save_model(model, path)
    back = load_model(path)
    window = ds.matrix(0)
    assert np.allclose(back.predict_scores(window), model.predict_scores(window), atol=0)
    assert back.window_length == model.window_length


def test_version_check(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text('{"format_version": 99}')
    with pytest.raises(ValidationError, match="format"):
        load_model(path)
