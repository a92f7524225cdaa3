"""Leakage-safe train/validation/test splitting on 10-minute segments.

Rows are grouped into contiguous segments per user; whole segments are drawn
for test and validation, and any segment adjacent to a held-out one is
discarded from train to break minute-to-minute correlation across the
boundary.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ..errors import ValidationError
from .dataset import LabeledDataset

SegmentKey = tuple[str, int]  # (user, minute_index // segment_minutes)


@dataclass
class SplitResult:
    train: LabeledDataset
    validation: LabeledDataset | None
    test: LabeledDataset
    manifest: dict

    def save_manifest(self, path: str | Path) -> None:
        Path(path).write_text(json.dumps(self.manifest, indent=2))


def segment_key_str(key: SegmentKey) -> str:
    return f"{key[0]}:{key[1]}"


def segment_split(
    ds: LabeledDataset,
    segment_minutes: int = 10,
    test_fraction: float = 0.10,
    val_fraction: float = 0.10,
    seed: int = 0,
) -> SplitResult:
    if ds.n_rows == 0:
        raise ValidationError("dataset is empty", field="ds")
    if not 0.0 < test_fraction < 0.5:
        raise ValidationError("must be in (0, 0.5)", field="test_fraction")
    if not 0.0 <= val_fraction < 0.5:
        raise ValidationError("must be in [0, 0.5)", field="val_fraction")
    if segment_minutes < 1:
        raise ValidationError("must be >= 1", field="segment_minutes")

    seg_rows: dict[SegmentKey, list[int]] = {}
    for i in range(ds.n_rows):
        key = (ds.labels[i], int(ds.minute_index[i]) // segment_minutes)
        seg_rows.setdefault(key, []).append(i)
    segments = sorted(seg_rows)

    n_test = math.floor(test_fraction * len(segments))
    n_val = math.floor(val_fraction * len(segments))
    if n_test == 0:
        raise ValidationError(
            f"{len(segments)} segments cannot satisfy test_fraction={test_fraction}", field="test_fraction"
        )
    if val_fraction > 0 and n_val == 0:
        raise ValidationError(
            f"{len(segments)} segments cannot satisfy val_fraction={val_fraction}", field="val_fraction"
        )

    rng = np.random.default_rng(seed)
    order = rng.permutation(len(segments))
    test_keys = {segments[i] for i in order[:n_test]}
    val_keys = {segments[i] for i in order[n_test : n_test + n_val]}

    held = test_keys | val_keys
    excluded = set()
    for user, seg in held:
        for neighbour in ((user, seg - 1), (user, seg + 1)):
            if neighbour in seg_rows and neighbour not in held:
                excluded.add(neighbour)
    train_keys = [k for k in segments if k not in held and k not in excluded]
    if not train_keys:
        raise ValidationError("no segments left for training", field="test_fraction")

    def gather(keys) -> LabeledDataset:
        idx = sorted(i for k in keys for i in seg_rows[k])
        return ds.subset(idx)

    manifest = {
        "segment_minutes": segment_minutes,
        "seed": seed,
        "test_fraction": test_fraction,
        "val_fraction": val_fraction,
        "train": [segment_key_str(k) for k in train_keys],
        "validation": sorted(segment_key_str(k) for k in val_keys),
        "test": sorted(segment_key_str(k) for k in test_keys),
        "excluded": sorted(segment_key_str(k) for k in excluded),
    }
    return SplitResult(
        train=gather(train_keys),
        validation=gather(sorted(val_keys)) if val_keys else None,
        test=gather(sorted(test_keys)),
        manifest=manifest,
    )


def assert_no_leakage(split: SplitResult, segment_minutes: int = 10) -> None:
    """Raise if any train row shares or neighbours a held-out segment."""

    def seg_set(part: LabeledDataset | None) -> set[SegmentKey]:
        if part is None:
            return set()
        return {
            (part.labels[i], int(part.minute_index[i]) // segment_minutes)
            for i in range(part.n_rows)
        }

    train = seg_set(split.train)
    held = seg_set(split.test) | seg_set(split.validation)
    for user, seg in held:
        for cand in ((user, seg - 1), (user, seg), (user, seg + 1)):
            if cand in train:
                raise AssertionError(f"leakage: train touches held-out segment {cand}")
