"""Stacked LSTM sequence classifier with truncated backprop through the window.

Standard cells (input/forget/cell/output gates), optional inter-layer
dropout, final hidden state into a dense softmax head. Active rows are
standardized with training statistics; all-fill (-1) rows are kept at the
fill value so inactivity stays explicit.
"""

from __future__ import annotations

import numpy as np

from ..errors import SchemaError, ValidationError
from ..pipeline.sequences import FILL_VALUE, SequenceDataset, SequenceWindow
from .base import TrainedModel, finalize_scores
from .nn_core import Adam, check_finite_loss, copy_params, glorot, onehot_codes, sigmoid, softmax, softmax_cross_entropy
from .spec import ModelSpec

_STD_FLOOR = 1e-12


def init_lstm_params(input_dim: int, layers: list[int], n_classes: int, seed: int) -> dict:
    rng = np.random.default_rng(seed & 0xFFFFFFFFFFFFFFFF)
    params: dict[str, np.ndarray] = {}
    in_dim = input_dim
    for l, H in enumerate(layers):
        params[f"Wx{l}"] = glorot(rng, in_dim, 4 * H)
        params[f"Wh{l}"] = glorot(rng, H, 4 * H)
        b = np.zeros(4 * H)
        b[H : 2 * H] = 1.0  # forget-gate bias
        params[f"b{l}"] = b
        in_dim = H
    params["Wout"] = glorot(rng, layers[-1], n_classes)
    params["bout"] = np.zeros(n_classes)
    return params


def lstm_forward(
    params: dict,
    layers: list[int],
    X: np.ndarray,
    dropout: float = 0.0,
    rng: np.random.Generator | None = None,
):
    """Returns logits and the caches needed for backprop.

    Dropout (inverted, per element) is applied between stacked layers only
    when an rng is supplied, i.e. in training mode.
    """
    B, T, _ = X.shape
    seq = X
    caches = []
    masks: list[np.ndarray | None] = []
    for l, H in enumerate(layers):
        h = np.zeros((B, H))
        c = np.zeros((B, H))
        layer_cache = []
        outs = np.empty((B, T, H))
        Wx, Wh, b = params[f"Wx{l}"], params[f"Wh{l}"], params[f"b{l}"]
        for t in range(T):
            x_t = seq[:, t, :]
            z = x_t @ Wx + h @ Wh + b
            i = sigmoid(z[:, :H])
            f = sigmoid(z[:, H : 2 * H])
            g = np.tanh(z[:, 2 * H : 3 * H])
            o = sigmoid(z[:, 3 * H :])
            c_new = f * c + i * g
            tc = np.tanh(c_new)
            h_new = o * tc
            layer_cache.append((x_t, h, c, i, f, g, o, tc))
            h, c = h_new, c_new
            outs[:, t, :] = h
        caches.append(layer_cache)
        if l < len(layers) - 1:
            if rng is not None and dropout > 0:
                mask = (rng.random(outs.shape) >= dropout) / (1.0 - dropout)
                outs = outs * mask
                masks.append(mask)
            else:
                masks.append(None)
        seq = outs
    logits = seq[:, -1, :] @ params["Wout"] + params["bout"]
    return logits, (caches, masks, seq)


def lstm_backward(params: dict, layers: list[int], cache, dlogits: np.ndarray) -> dict:
    caches, masks, top_out = cache
    grads = {k: np.zeros_like(v) for k, v in params.items()}
    B = dlogits.shape[0]
    T = len(caches[0])

    grads["Wout"] = top_out[:, -1, :].T @ dlogits
    grads["bout"] = dlogits.sum(axis=0)

    dseq = np.zeros((B, T, layers[-1]))
    dseq[:, -1, :] = dlogits @ params["Wout"].T
    for l in range(len(layers) - 1, -1, -1):
        H = layers[l]
        layer_cache = caches[l]
        in_dim = layer_cache[0][0].shape[1]
        Wx, Wh = params[f"Wx{l}"], params[f"Wh{l}"]
        dseq_in = np.zeros((B, T, in_dim))
        dh_next = np.zeros((B, H))
        dc_next = np.zeros((B, H))
        for t in range(T - 1, -1, -1):
            x_t, h_prev, c_prev, i, f, g, o, tc = layer_cache[t]
            dh = dseq[:, t, :] + dh_next
            do = dh * tc
            dc = dh * o * (1.0 - tc * tc) + dc_next
            di = dc * g
            df = dc * c_prev
            dg = dc * i
            dz = np.concatenate(
                [di * i * (1 - i), df * f * (1 - f), dg * (1 - g * g), do * o * (1 - o)], axis=1
            )
            grads[f"Wx{l}"] += x_t.T @ dz
            grads[f"Wh{l}"] += h_prev.T @ dz
            grads[f"b{l}"] += dz.sum(axis=0)
            dseq_in[:, t, :] = dz @ Wx.T
            dh_next = dz @ Wh.T
            dc_next = dc * f
        if l > 0:
            mask = masks[l - 1]
            dseq = dseq_in * mask if mask is not None else dseq_in
    return grads


def lstm_loss_and_grads(
    params: dict,
    layers: list[int],
    X: np.ndarray,
    onehot: np.ndarray,
    dropout: float = 0.0,
    rng: np.random.Generator | None = None,
):
    logits, cache = lstm_forward(params, layers, X, dropout, rng)
    loss, dlogits = softmax_cross_entropy(logits, onehot)
    return loss, lstm_backward(params, layers, cache, dlogits)


class LstmModel(TrainedModel):
    family = "lstm"

    def __init__(self, spec, classes, input_dim, window_length, layers, params, mean, std):
        super().__init__(spec, classes, feature_names=None)
        self.input_dim = input_dim
        self.window_length = window_length
        self.layers = layers
        self.params = params
        self.mean = mean
        self.std = std

    def _transform(self, X: np.ndarray) -> np.ndarray:
        fill_rows = np.all(X == FILL_VALUE, axis=2)
        Z = (X - self.mean) / self.std
        Z[fill_rows] = FILL_VALUE
        return Z

    def _as_batch(self, x) -> np.ndarray:
        if isinstance(x, SequenceWindow):
            x = x.matrix
        X = np.asarray(x, dtype=np.float64)
        if X.ndim == 2:
            X = X[None]
        if X.ndim != 3 or X.shape[2] != self.input_dim:
            raise SchemaError(f"lstm expects (T, {self.input_dim}) windows")
        if np.isnan(X).any():
            raise ValidationError("NaN in prediction input", field="x")
        all_fill = np.all(X == FILL_VALUE, axis=(1, 2))
        if all_fill.any():
            raise ValidationError("window contains no active minutes", field="x")
        return X

    def predict_scores(self, x) -> np.ndarray:
        X = self._as_batch(x)
        logits, _ = lstm_forward(self.params, self.layers, self._transform(X))
        return finalize_scores(softmax(logits))

    def predict_dataset_labels(self, ds: SequenceDataset, batch_size: int = 128) -> list[str]:
        labels = []
        for start in range(0, len(ds), batch_size):
            idx = range(start, min(start + batch_size, len(ds)))
            scores = self.predict_scores(ds.batch(idx))
            labels += [self.classes[int(i)] for i in np.argmax(scores, axis=1)]
        return labels

    def loss_and_grads(self, X, codes: np.ndarray):
        """Training-mode loss/gradients with dropout disabled (for checks)."""
        X = self._as_batch(X)
        onehot = onehot_codes(codes, len(self.classes))
        return lstm_loss_and_grads(self.params, self.layers, self._transform(X), onehot)

    def params_dict(self) -> dict:
        return {
            "input_dim": self.input_dim,
            "window_length": self.window_length,
            "layers": self.layers,
            "mean": self.mean.tolist(),
            "std": self.std.tolist(),
            "weights": {k: v.tolist() for k, v in self.params.items()},
        }

    @classmethod
    def from_params(cls, spec, classes, feature_names, params) -> "LstmModel":
        weights = {k: np.asarray(v, dtype=np.float64) for k, v in params["weights"].items()}
        return cls(
            spec,
            classes,
            int(params["input_dim"]),
            int(params["window_length"]),
            list(params["layers"]),
            weights,
            np.asarray(params["mean"], dtype=np.float64),
            np.asarray(params["std"], dtype=np.float64),
        )


def _layer_sizes(spec: ModelSpec) -> list[int]:
    n = int(spec.get("lstm_layers"))
    nodes = spec.get("nodes_per_layer")
    if isinstance(nodes, (list, tuple)):
        sizes = [int(v) for v in nodes]
        if len(sizes) != n:
            raise ValidationError(
                f"nodes_per_layer lists {len(sizes)} sizes for {n} layers", field="nodes_per_layer"
            )
        return sizes
    return [int(nodes)] * n


def _active_row_stats(ds: SequenceDataset, batch_size: int = 256):
    total = np.zeros(ds.width)
    total_sq = np.zeros(ds.width)
    count = 0
    for start in range(0, len(ds), batch_size):
        X = ds.batch(range(start, min(start + batch_size, len(ds))))
        active = ~np.all(X == FILL_VALUE, axis=2)
        rows = X[active]
        total += rows.sum(axis=0)
        total_sq += (rows * rows).sum(axis=0)
        count += rows.shape[0]
    if count == 0:
        raise ValidationError("training sequences contain no active minutes", field="train")
    mean = total / count
    var = np.maximum(total_sq / count - mean * mean, 0.0)
    return mean, np.maximum(np.sqrt(var), _STD_FLOOR)


def fit_lstm(
    spec: ModelSpec,
    train: SequenceDataset,
    validation: SequenceDataset | None = None,
) -> LstmModel:
    classes = train.classes()
    if len(classes) < 2:
        raise ValidationError("need at least two classes", field="train")
    layers = _layer_sizes(spec)
    dropout = float(spec.get("dropout"))

    mean, std = _active_row_stats(train)
    params = init_lstm_params(train.width, layers, len(classes), spec.seed)
    model = LstmModel(spec, classes, train.width, train.T, layers, params, mean, std)

    index = {c: i for i, c in enumerate(classes)}
    codes = np.array([index[l] for l in train.labels], dtype=np.int64)
    val_codes = None
    if validation is not None and len(validation) > 0:
        val_codes = np.array([index.get(l, -1) for l in validation.labels], dtype=np.int64)
        if (val_codes < 0).any():
            raise ValidationError("validation labels outside training classes", field="validation")

    rng = np.random.default_rng((spec.seed ^ 0x5EED) & 0xFFFFFFFFFFFFFFFF)
    opt = Adam(params, lr=float(spec.get("learning_rate")))
    batch = int(spec.get("batch_size"))
    patience = int(spec.get("patience"))
    onehot_all = onehot_codes(codes, len(classes))

    def dataset_loss(ds: SequenceDataset, oh: np.ndarray) -> float:
        total, n = 0.0, 0
        for start in range(0, len(ds), batch):
            idx = list(range(start, min(start + batch, len(ds))))
            X = model._transform(ds.batch(idx))
            logits, _ = lstm_forward(params, layers, X)
            loss, _ = softmax_cross_entropy(logits, oh[idx])
            total += loss * len(idx)
            n += len(idx)
        return total / n

    best_loss, best_params, since_best = np.inf, copy_params(params), 0
    curve = []
    for _ in range(int(spec.get("epochs"))):
        order = rng.permutation(len(train))
        for start in range(0, len(train), batch):
            idx = order[start : start + batch]
            X = model._transform(train.batch(idx))
            loss, grads = lstm_loss_and_grads(
                params, layers, X, onehot_all[idx], dropout=dropout, rng=rng
            )
            check_finite_loss(loss)
            opt.step(params, grads)
        if val_codes is not None:
            monitor = dataset_loss(validation, onehot_codes(val_codes, len(classes)))
        else:
            monitor = dataset_loss(train, onehot_all)
        check_finite_loss(monitor)
        curve.append(monitor)
        if monitor < best_loss - 1e-9:
            best_loss, best_params, since_best = monitor, copy_params(params), 0
        else:
            since_best += 1
            if since_best >= patience:
                break

    model.params = best_params
    model.training_report = {"epochs": len(curve), "loss_curve": curve, "n_train": len(train)}
    return model
