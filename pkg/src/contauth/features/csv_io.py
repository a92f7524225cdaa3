"""Feature vector CSV files.

Header: user_id, device_kind, minute_index, then feature names in schema
order. For PC files the sparse digraph names are densified to the union over
the file, sorted, after the fixed dense block; absent entries read back as 0.
"""

from __future__ import annotations

import csv
from pathlib import Path

from ..errors import ValidationError
from .schema import MOBILE_NAMES, MOBILE_SCHEMA_ID, PC_DENSE_NAMES, PC_SCHEMA_ID, MinuteFeatureVector

_META_COLS = ["user_id", "device_kind", "minute_index"]


def feature_columns(vectors: list[MinuteFeatureVector]) -> list[str]:
    """Schema-ordered column list covering every vector in the batch."""
    schema_ids = {v.schema_id for v in vectors}
    if len(schema_ids) != 1:
        raise ValidationError(f"mixed schemas in one file: {sorted(schema_ids)}", field="vectors")
    schema_id = schema_ids.pop()
    if schema_id == MOBILE_SCHEMA_ID:
        return list(MOBILE_NAMES)
    extras = set()
    for v in vectors:
        extras.update(set(v.features) - set(PC_DENSE_NAMES))
    return list(PC_DENSE_NAMES) + sorted(extras)


def write_feature_csv(vectors: list[MinuteFeatureVector], path: str | Path) -> list[str]:
    if not vectors:
        raise ValidationError("nothing to write", field="vectors")
    columns = feature_columns(vectors)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(_META_COLS + columns)
        for v in vectors:
            row = [v.user_id, v.device_kind, v.minute_index]
            row += [repr(v.features.get(name, 0.0)) for name in columns]
            w.writerow(row)
    return columns


def read_feature_csv(path: str | Path) -> list[MinuteFeatureVector]:
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or header[:3] != _META_COLS:
            raise ValidationError("missing or invalid header", field="feature_csv")
        columns = header[3:]
        vectors = []
        for row in reader:
            if not row:
                continue
            kind = row[1]
            schema_id = PC_SCHEMA_ID if kind == "pc" else MOBILE_SCHEMA_ID
            features = {name: float(cell) for name, cell in zip(columns, row[3:])}
            vectors.append(MinuteFeatureVector(row[0], kind, int(row[2]), features, schema_id))
    return vectors
