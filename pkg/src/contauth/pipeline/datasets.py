"""Assembly of the single-device datasets from per-minute feature vectors.

Dataset 1: PC vectors densified over the union of digraph names seen in the
corpus. Dataset 2: the mobile app-usage block. Dataset 3: the mobile sensor
block.
"""

from __future__ import annotations

import numpy as np

from ..errors import ValidationError
from ..features.schema import (
    MOBILE_SCHEMA_ID,
    PC_DENSE_NAMES,
    PC_SCHEMA_ID,
    MinuteFeatureVector,
    mobile_app_feature_names,
    sensor_feature_names,
)
from .dataset import LabeledDataset


def _to_dataset(vectors: list[MinuteFeatureVector], columns: list[str], provenance: str) -> LabeledDataset:
    rows = np.zeros((len(vectors), len(columns)))
    col_idx = {name: j for j, name in enumerate(columns)}
    for i, v in enumerate(vectors):
        for name, value in v.features.items():
            j = col_idx.get(name)
            if j is not None:
                rows[i, j] = value
    return LabeledDataset(
        list(columns),
        rows,
        [v.user_id for v in vectors],
        np.array([v.minute_index for v in vectors], dtype=np.int64),
        [provenance] * len(vectors),
    )


def pc_dataset(vectors: list[MinuteFeatureVector]) -> LabeledDataset:
    """Dataset 1: dense PC columns plus the union of observed digraph names."""
    pc = [v for v in vectors if v.schema_id == PC_SCHEMA_ID]
    if not pc:
        raise ValidationError("no pc vectors", field="vectors")
    extras: set[str] = set()
    dense = set(PC_DENSE_NAMES)
    for v in pc:
        extras.update(set(v.features) - dense)
    columns = list(PC_DENSE_NAMES) + sorted(extras)
    return _to_dataset(pc, columns, "pc")


def mobile_app_dataset(vectors: list[MinuteFeatureVector]) -> LabeledDataset:
    """Dataset 2: the 13 app usage features of mobile vectors."""
    mob = [v for v in vectors if v.schema_id == MOBILE_SCHEMA_ID]
    if not mob:
        raise ValidationError("no mobile vectors", field="vectors")
    return _to_dataset(mob, mobile_app_feature_names(), "mobile_app")


def sensor_dataset(vectors: list[MinuteFeatureVector]) -> LabeledDataset:
    """Dataset 3: the 40 sensor features of mobile vectors."""
    mob = [v for v in vectors if v.schema_id == MOBILE_SCHEMA_ID]
    if not mob:
        raise ValidationError("no mobile vectors", field="vectors")
    return _to_dataset(mob, sensor_feature_names(), "sensor")


def active_minutes(vectors: list[MinuteFeatureVector], schema_id: str) -> dict[str, set[int]]:
    out: dict[str, set[int]] = {}
    for v in vectors:
        if v.schema_id == schema_id:
            out.setdefault(v.user_id, set()).add(v.minute_index)
    return out
