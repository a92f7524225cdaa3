"""Tabular labelled datasets used throughout preprocessing and training."""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from ..errors import ValidationError

_META_COLS = ["user_id", "provenance", "minute_index"]


@dataclass
class LabeledDataset:
    feature_names: list[str]
    rows: np.ndarray  # (n, d) float64
    labels: list[str]
    minute_index: np.ndarray  # (n,) int64
    provenance: list[str] = field(default_factory=list)

    def __post_init__(self):
        self.rows = np.asarray(self.rows, dtype=np.float64)
        if self.rows.ndim != 2:
            raise ValidationError("rows must be 2-D", field="rows")
        self.minute_index = np.asarray(self.minute_index, dtype=np.int64)
        n, d = self.rows.shape
        if len(self.feature_names) != d:
            raise ValidationError(f"{len(self.feature_names)} names for {d} columns", field="feature_names")
        if len(set(self.feature_names)) != d:
            raise ValidationError("feature names must be unique", field="feature_names")
        if len(self.labels) != n or len(self.minute_index) != n:
            raise ValidationError("labels/minute_index length must match row count", field="labels")
        if not self.provenance:
            self.provenance = [""] * n
        if len(self.provenance) != n:
            raise ValidationError("provenance length must match row count", field="provenance")

    @property
    def n_rows(self) -> int:
        return self.rows.shape[0]

    @property
    def n_features(self) -> int:
        return self.rows.shape[1]

    def column(self, name: str) -> np.ndarray:
        try:
            j = self.feature_names.index(name)
        except ValueError:
            raise ValidationError(f"unknown feature {name!r}", field="feature_names") from None
        return self.rows[:, j]

    def select_columns(self, names: list[str]) -> "LabeledDataset":
        idx = []
        for name in names:
            if name not in self.feature_names:
                raise ValidationError(f"unknown feature {name!r}", field="feature_names")
            idx.append(self.feature_names.index(name))
        return LabeledDataset(
            list(names), self.rows[:, idx], list(self.labels), self.minute_index.copy(), list(self.provenance)
        )

    def subset(self, row_idx) -> "LabeledDataset":
        row_idx = np.asarray(row_idx, dtype=np.int64)
        return LabeledDataset(
            list(self.feature_names),
            self.rows[row_idx],
            [self.labels[i] for i in row_idx],
            self.minute_index[row_idx],
            [self.provenance[i] for i in row_idx],
        )

    def classes(self) -> list[str]:
        return sorted(set(self.labels))

    def to_csv(self, path: str | Path) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(_META_COLS + self.feature_names)
            for i in range(self.n_rows):
                w.writerow(
                    [self.labels[i], self.provenance[i], int(self.minute_index[i])]
                    + [repr(float(v)) for v in self.rows[i]]
                )

    @classmethod
    def from_csv(cls, path: str | Path) -> "LabeledDataset":
        with open(path, newline="") as fh:
            reader = csv.reader(fh)
            header = next(reader, None)
            if header is None or header[:3] != _META_COLS:
                raise ValidationError("missing or invalid header", field="dataset_csv")
            names = header[3:]
            labels, provenance, minutes, rows = [], [], [], []
            for row in reader:
                if not row:
                    continue
                labels.append(row[0])
                provenance.append(row[1])
                minutes.append(int(row[2]))
                rows.append([float(v) for v in row[3:]])
        data = np.array(rows, dtype=np.float64) if rows else np.zeros((0, len(names)))
        return cls(names, data, labels, np.array(minutes, dtype=np.int64), provenance)

    def write_sidecar(self, path: str | Path, **extra) -> None:
        """JSON sidecar describing the dataset schema."""
        meta = {"feature_names": self.feature_names, "n_rows": self.n_rows}
        meta.update(extra)
        Path(path).write_text(json.dumps(meta, indent=2))
