"""Dataset preprocessing: constant removal, one-hot encoding, importance selection."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import ValidationError
from .dataset import LabeledDataset

_EPS = 1e-12


def drop_constant_features(ds: LabeledDataset) -> tuple[LabeledDataset, list[str]]:
    """Remove columns that take fewer than two distinct values."""
    if ds.n_rows == 0:
        raise ValidationError("dataset is empty", field="ds")
    keep, dropped = [], []
    for j, name in enumerate(ds.feature_names):
        col = ds.rows[:, j]
        if np.all(col == col[0]):
            dropped.append(name)
        else:
            keep.append(name)
    return ds.select_columns(keep), dropped


@dataclass
class OneHotEncoder:
    """Expands integer-code columns into per-category indicators plus an unknown bucket."""

    categories: dict[str, list[int]] = field(default_factory=dict)

    def fit(self, ds: LabeledDataset, columns: list[str]) -> "OneHotEncoder":
        for name in columns:
            col = ds.column(name)
            if not np.all(col == np.round(col)):
                raise ValidationError(f"{name} holds non-integer codes", field="categorical_columns")
            self.categories[name] = sorted(int(v) for v in np.unique(col))
        return self

    def encoded_names(self, column: str) -> list[str]:
        return [f"{column}={c}" for c in self.categories[column]] + [f"{column}=unknown"]

    def transform(self, ds: LabeledDataset) -> LabeledDataset:
        names: list[str] = []
        blocks: list[np.ndarray] = []
        for j, name in enumerate(ds.feature_names):
            col = ds.rows[:, j]
            if name not in self.categories:
                names.append(name)
                blocks.append(col[:, None])
                continue
            cats = self.categories[name]
            block = np.zeros((ds.n_rows, len(cats) + 1))
            codes = np.round(col).astype(np.int64)
            unknown = np.ones(ds.n_rows, dtype=bool)
            for k, cat in enumerate(cats):
                hit = codes == cat
                block[hit, k] = 1.0
                unknown &= ~hit
            block[unknown, len(cats)] = 1.0
            names.extend(self.encoded_names(name))
            blocks.append(block)
        return LabeledDataset(
            names, np.hstack(blocks), list(ds.labels), ds.minute_index.copy(), list(ds.provenance)
        )


def one_hot_encode(
    ds: LabeledDataset, categorical_columns: list[str]
) -> tuple[LabeledDataset, OneHotEncoder]:
    for name in categorical_columns:
        if name not in ds.feature_names:
            raise ValidationError(f"unknown column {name!r}", field="categorical_columns")
    enc = OneHotEncoder().fit(ds, list(categorical_columns))
    return enc.transform(ds), enc


def importance_select(
    ds: LabeledDataset,
    importances: dict[str, float],
    mode: str = "cumulative",
    threshold: float = 0.95,
    k: int | None = None,
) -> tuple[LabeledDataset, dict]:
    """Keep the most important columns.

    cumulative: minimal prefix (by descending weight, ties by name) whose
    weight sum reaches threshold * total. top_k: exactly k columns. The kept
    columns stay in their original dataset order.
    """
    missing = [n for n in ds.feature_names if n not in importances]
    if missing:
        raise ValidationError(f"importances missing {missing[:3]}...", field="importances")
    weights = {n: float(importances[n]) for n in ds.feature_names}
    if any(w < 0 for w in weights.values()):
        raise ValidationError("weights must be >= 0", field="importances")
    total = sum(weights.values())
    if total <= 0:
        raise ValidationError("weights must not all be zero", field="importances")

    ranked = sorted(weights, key=lambda n: (-weights[n], n))
    if mode == "cumulative":
        if not 0.0 < threshold <= 1.0:
            raise ValidationError("threshold must be in (0,1]", field="threshold")
        kept_set = set()
        acc = 0.0
        for name in ranked:
            kept_set.add(name)
            acc += weights[name]
            if acc >= threshold * total - _EPS:
                break
    elif mode == "top_k":
        if k is None or not 1 <= k <= ds.n_features:
            raise ValidationError("k must be in [1, n_features]", field="k")
        kept_set = set(ranked[:k])
    else:
        raise ValidationError(f"unknown mode {mode!r}", field="mode")

    kept = [n for n in ds.feature_names if n in kept_set]
    report = {
        "mode": mode,
        "threshold": threshold if mode == "cumulative" else None,
        "k": k if mode == "top_k" else None,
        "kept": kept,
        "dropped": [n for n in ds.feature_names if n not in kept_set],
    }
    return ds.select_columns(kept), report


def project_features(
    features: dict[str, float],
    names: list[str],
    categories: dict[str, list[int]] | None = None,
) -> list[float]:
    """Evaluate encoded/selected feature names against a raw feature map.

    Plain names look up the map (0 when absent, e.g. an unseen digraph);
    "col=code" names are one-hot indicators over the recorded training
    categories, with "col=unknown" catching unseen codes.
    """
    categories = categories or {}
    out = []
    for name in names:
        if "=" in name:
            col, _, code = name.partition("=")
            if col in categories:
                value = int(round(features.get(col, 0.0)))
                if code == "unknown":
                    out.append(1.0 if value not in categories[col] else 0.0)
                else:
                    out.append(1.0 if value == int(code) else 0.0)
                continue
        out.append(float(features.get(name, 0.0)))
    return out
