import numpy as np
import pytest

from contauth.models import (
    MlpModel,
    ModelSpec,
    gradient_check,
    init_mlp_params,
    train,
)
from contauth.pipeline import LabeledDataset


def flat_ds(X, labels):
    X = np.asarray(X, dtype=float)
    return LabeledDataset(
        [f"f{j}" for j in range(X.shape[1])],
        X,
        list(labels),
        np.arange(X.shape[0], dtype=np.int64),
    )


def blob_ds(n_per_class=60, k=3, d=4, seed=0, spread=5.0):
    rng = np.random.default_rng(seed)
    X, labels = [], []
    for c in range(k):
        centre = rng.normal(scale=spread, size=d)
        X.append(rng.normal(loc=centre, size=(n_per_class, d)))
        labels += [f"c{c}"] * n_per_class
    return flat_ds(np.vstack(X), labels)


def raw_mlp(sizes, seed=0, zero=False):
    """An untrained model with identity standardization, for direct checks."""
    params = init_mlp_params(sizes, seed)
    if zero:
        params = {k: np.zeros_like(v) for k, v in params.items()}
    classes = [f"c{i}" for i in range(sizes[-1])]
    spec = ModelSpec("mlp", {"layers": max(len(sizes) - 2, 1), "neurons_per_layer": 50})
    return MlpModel(spec, classes, [f"f{j}" for j in range(sizes[0])], params,
                    sizes, np.zeros(sizes[0]), np.ones(sizes[0]))


class TestMlpTraining:
    def test_learns_separable_blobs(self):
        ds = blob_ds(n_per_class=80, k=3, d=4, seed=1)
        spec = ModelSpec("mlp", {"layers": 1, "neurons_per_layer": 50, "epochs": 60}, seed=0)
        model = train(spec, ds)
        acc = np.mean(np.array(model.predict_labels(ds.rows)) == np.array(ds.labels))
        assert acc > 0.97

    def test_deterministic(self):
        ds = blob_ds(n_per_class=30, seed=2)
        spec = {"layers": 1, "neurons_per_layer": 50, "epochs": 5}
        a = train(ModelSpec("mlp", dict(spec), seed=3), ds)
        b = train(ModelSpec("mlp", dict(spec), seed=3), ds)
        for k in a.params:
            assert np.array_equal(a.params[k], b.params[k])

    def test_zero_weights_give_uniform_scores_and_first_class(self):
        model = raw_mlp([4, 8, 3], zero=True)
        pred = model.predict(np.array([1.0, -2.0, 0.5, 3.0]))
        assert pred.label == "c0"
        for score in pred.scores.values():
            assert score == pytest.approx(1 / 3, abs=1e-12)

    def test_early_stopping_uses_validation(self):
        ds = blob_ds(n_per_class=40, seed=5)
        val = blob_ds(n_per_class=10, seed=6)
        spec = ModelSpec("mlp", {"layers": 1, "neurons_per_layer": 50, "epochs": 100, "patience": 3}, seed=1)
        model = train(spec, ds, val)
        assert model.training_report["epochs"] <= 100


class TestGradientChecks:
    def test_linear_softmax_within_1e6(self):
        rng = np.random.default_rng(0)
        model = raw_mlp([6, 4], seed=1)
        X = rng.normal(size=(12, 6))
        codes = rng.integers(0, 4, size=12)
        err = gradient_check(model, X, codes, n_params=200, seed=0)
        assert err <= 1e-6

    def test_zero_weight_bias_gradient_is_class_frequency_residual(self):
        model = raw_mlp([3, 4], zero=True)
        X = np.random.default_rng(1).normal(size=(8, 3))
        codes = np.array([0, 0, 1, 1, 2, 2, 3, 3])
        _, grads = model.loss_and_grads(X, codes)
        freq = np.bincount(codes, minlength=4) / len(codes)
        expected = 1.0 / 4 - freq
        assert np.allclose(grads["b0"], expected, atol=1e-12)

    def test_mlp_two_hidden_64_within_1e4(self):
        rng = np.random.default_rng(3)
        model = raw_mlp([10, 64, 64, 5], seed=2)
        X = rng.normal(size=(16, 10))
        codes = rng.integers(0, 5, size=16)
        err = gradient_check(model, X, codes, n_params=300, seed=1)
        assert err <= 1e-4

    def test_check_covers_at_least_200_parameters(self):
        model = raw_mlp([5, 16, 3], seed=4)
        X = np.random.default_rng(5).normal(size=(6, 5))
        codes = np.array([0, 1, 2, 0, 1, 2])
        err = gradient_check(model, X, codes, n_params=50, seed=2)  # floor kicks in
        assert err <= 1e-4
