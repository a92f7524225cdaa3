"""Multi-layer perceptron: ReLU hidden layers, softmax output.

Inputs are standardized with training statistics stored on the model.
Training is mini-batch Adam with early stopping on validation loss.
"""

from __future__ import annotations

import numpy as np

from .base import TrainedModel, check_training_matrix
from .nn_core import Adam, check_finite_loss, copy_params, glorot, onehot_codes, softmax, softmax_cross_entropy
from .spec import ModelSpec

_STD_FLOOR = 1e-12


def init_mlp_params(sizes: list[int], seed: int) -> dict[str, np.ndarray]:
    """sizes = [input, hidden..., output]."""
    rng = np.random.default_rng(seed & 0xFFFFFFFFFFFFFFFF)
    params = {}
    for l in range(len(sizes) - 1):
        params[f"W{l}"] = glorot(rng, sizes[l], sizes[l + 1])
        params[f"b{l}"] = np.zeros(sizes[l + 1])
    return params


def mlp_forward(params: dict, n_layers: int, X: np.ndarray) -> tuple[np.ndarray, list[np.ndarray]]:
    """Logits plus the post-activation cache per layer."""
    a = X
    cache = [a]
    for l in range(n_layers - 1):
        a = np.maximum(a @ params[f"W{l}"] + params[f"b{l}"], 0.0)
        cache.append(a)
    logits = a @ params[f"W{n_layers - 1}"] + params[f"b{n_layers - 1}"]
    return logits, cache


def mlp_loss_and_grads(
    params: dict, n_layers: int, X: np.ndarray, onehot: np.ndarray
) -> tuple[float, dict[str, np.ndarray]]:
    logits, cache = mlp_forward(params, n_layers, X)
    loss, dlogits = softmax_cross_entropy(logits, onehot)
    grads = {}
    delta = dlogits
    for l in range(n_layers - 1, -1, -1):
        a_prev = cache[l]
        grads[f"W{l}"] = a_prev.T @ delta
        grads[f"b{l}"] = delta.sum(axis=0)
        if l > 0:
            delta = (delta @ params[f"W{l}"].T) * (a_prev > 0)
    return loss, grads


class MlpModel(TrainedModel):
    family = "mlp"

    def __init__(self, spec, classes, feature_names, params, sizes, mean, std):
        super().__init__(spec, classes, feature_names)
        self.params = params
        self.sizes = sizes
        self.mean = mean
        self.std = std

    @property
    def n_layers(self) -> int:
        return len(self.sizes) - 1

    def _raw_scores(self, X: np.ndarray) -> np.ndarray:
        Z = (X - self.mean) / self.std
        logits, _ = mlp_forward(self.params, self.n_layers, Z)
        return softmax(logits)

    def loss_and_grads(self, X: np.ndarray, codes: np.ndarray):
        """Training-mode loss/gradients on a raw (unstandardized) batch."""
        Z = (np.asarray(X, dtype=np.float64) - self.mean) / self.std
        return mlp_loss_and_grads(self.params, self.n_layers, Z, onehot_codes(codes, len(self.classes)))

    def params_dict(self) -> dict:
        return {
            "sizes": self.sizes,
            "mean": self.mean.tolist(),
            "std": self.std.tolist(),
            "weights": {k: v.tolist() for k, v in self.params.items()},
        }

    @classmethod
    def from_params(cls, spec, classes, feature_names, params) -> "MlpModel":
        weights = {k: np.asarray(v, dtype=np.float64) for k, v in params["weights"].items()}
        return cls(
            spec,
            classes,
            feature_names,
            weights,
            list(params["sizes"]),
            np.asarray(params["mean"], dtype=np.float64),
            np.asarray(params["std"], dtype=np.float64),
        )


def fit_mlp(
    spec: ModelSpec,
    X: np.ndarray,
    codes: np.ndarray,
    classes: list[str],
    feature_names,
    validation: tuple[np.ndarray, np.ndarray] | None = None,
) -> MlpModel:
    X = check_training_matrix(X)
    mean = X.mean(axis=0)
    std = np.maximum(X.std(axis=0), _STD_FLOOR)
    Z = (X - mean) / std

    n_hidden = int(spec.get("layers"))
    width = int(spec.get("neurons_per_layer"))
    sizes = [X.shape[1]] + [width] * n_hidden + [len(classes)]
    params = init_mlp_params(sizes, spec.seed)
    n_layers = len(sizes) - 1

    onehot = onehot_codes(codes, len(classes))
    val = None
    if validation is not None and len(validation[1]) > 0:
        Xv = (check_training_matrix(validation[0]) - mean) / std
        val = (Xv, onehot_codes(validation[1], len(classes)))

    rng = np.random.default_rng((spec.seed ^ 0x5EED) & 0xFFFFFFFFFFFFFFFF)
    opt = Adam(params, lr=float(spec.get("learning_rate")))
    batch = int(spec.get("batch_size"))
    patience = int(spec.get("patience"))
    best_loss, best_params, since_best = np.inf, copy_params(params), 0
    curve = []
    for _ in range(int(spec.get("epochs"))):
        order = rng.permutation(Z.shape[0])
        for start in range(0, Z.shape[0], batch):
            idx = order[start : start + batch]
            loss, grads = mlp_loss_and_grads(params, n_layers, Z[idx], onehot[idx])
            check_finite_loss(loss)
            opt.step(params, grads)
        if val is not None:
            monitor, _ = softmax_cross_entropy(mlp_forward(params, n_layers, val[0])[0], val[1])
        else:
            monitor, _ = softmax_cross_entropy(mlp_forward(params, n_layers, Z)[0], onehot)
        check_finite_loss(monitor)
        curve.append(monitor)
        if monitor < best_loss - 1e-9:
            best_loss, best_params, since_best = monitor, copy_params(params), 0
        else:
            since_best += 1
            if since_best >= patience:
                break

    model = MlpModel(spec, classes, feature_names, best_params, sizes, mean, std)
    model.training_report = {"epochs": len(curve), "loss_curve": curve, "n_train": int(X.shape[0])}
    return model
