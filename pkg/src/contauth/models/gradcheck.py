"""Finite-difference verification of network gradients.

Compares analytic gradients with central differences over a random subset of
parameters, stepping each coordinate by 1e-5 scaled by its magnitude.
Dropout must be (and is) disabled by the models' loss_and_grads.
"""

from __future__ import annotations

import numpy as np

from ..errors import ValidationError
from .nn_core import check_finite_loss


def gradient_check(model, X, codes, n_params: int = 200, step: float = 1e-5, seed: int = 0) -> float:
    """Max relative error between analytic and numeric gradients.

    `model` must expose a params dict and loss_and_grads(X, codes); works for
    the MLP and LSTM families.
    """
    codes = np.asarray(codes, dtype=np.int64)
    if len(codes) < 1:
        raise ValidationError("batch must not be empty", field="batch")
    loss, grads = model.loss_and_grads(X, codes)
    check_finite_loss(loss)

    coords = []
    for name in sorted(model.params):
        for flat_idx in range(model.params[name].size):
            coords.append((name, flat_idx))
    rng = np.random.default_rng(seed)
    take = min(max(n_params, 200), len(coords))
    picked = rng.choice(len(coords), size=take, replace=False)

    max_rel = 0.0
    for pick in picked:
        name, flat_idx = coords[int(pick)]
        arr = model.params[name]
        flat = arr.reshape(-1)
        orig = flat[flat_idx]
        h = step * max(abs(orig), 1.0)

        flat[flat_idx] = orig + h
        loss_plus, _ = model.loss_and_grads(X, codes)
        flat[flat_idx] = orig - h
        loss_minus, _ = model.loss_and_grads(X, codes)
        flat[flat_idx] = orig

        numeric = (loss_plus - loss_minus) / (2 * h)
        analytic = grads[name].reshape(-1)[flat_idx]
        rel = abs(analytic - numeric) / max(abs(analytic), abs(numeric), 1e-6)
        max_rel = max(max_rel, rel)
    return max_rel
