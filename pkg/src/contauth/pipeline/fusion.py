"""Multi-device fusion: one 240-wide vector per (user, minute).

Block layout is fixed: 150 PC features, then 50 mobile-app features, then 40
sensor features. A device absent in a minute contributes an all-zero block;
minutes with no active device produce no vector at all.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import ValidationError
from ..features.schema import MinuteFeatureVector
from .dataset import LabeledDataset

PC_BLOCK = 150
MOBILE_APP_BLOCK = 50
SENSOR_BLOCK = 40
FUSED_WIDTH = PC_BLOCK + MOBILE_APP_BLOCK + SENSOR_BLOCK

_BLOCKS = (("pc", PC_BLOCK), ("mapp", MOBILE_APP_BLOCK), ("sens", SENSOR_BLOCK))


@dataclass
class FusedVector:
    user_id: str
    minute_index: int
    pc_block: np.ndarray
    mobile_app_block: np.ndarray
    sensor_block: np.ndarray
    active: dict[str, bool]  # block name -> device contributed this minute

    def values(self) -> np.ndarray:
        return np.concatenate([self.pc_block, self.mobile_app_block, self.sensor_block])

    def __post_init__(self):
        for name, width, arr in (
            ("pc", PC_BLOCK, self.pc_block),
            ("mapp", MOBILE_APP_BLOCK, self.mobile_app_block),
            ("sens", SENSOR_BLOCK, self.sensor_block),
        ):
            if arr.shape != (width,):
                raise ValidationError(f"{name} block must have width {width}", field=name)
        if not any(self.active.values()):
            raise ValidationError("at least one device must be active", field="active")


def _block_values(vec: MinuteFeatureVector | None, width: int, name: str) -> tuple[np.ndarray, bool]:
    if vec is None:
        return np.zeros(width), False
    values = np.fromiter(vec.features.values(), dtype=np.float64, count=len(vec.features))
    if values.shape != (width,):
        raise ValidationError(
            f"{name} vector has {values.shape[0]} features, expected the selected {width}", field=name
        )
    return values, True


def fuse_minute_vectors(
    pc: MinuteFeatureVector | None,
    mapp: MinuteFeatureVector | None,
    sens: MinuteFeatureVector | None,
) -> FusedVector | None:
    """Fuse up to three selected-feature vectors for the same (user, minute)."""
    present = [v for v in (pc, mapp, sens) if v is not None]
    if not present:
        return None
    users = {v.user_id for v in present}
    minutes = {v.minute_index for v in present}
    if len(users) != 1:
        raise ValidationError(f"mismatched users {sorted(users)}", field="user_id")
    if len(minutes) != 1:
        raise ValidationError(f"mismatched minutes {sorted(minutes)}", field="minute_index")

    pc_vals, pc_on = _block_values(pc, PC_BLOCK, "pc")
    mapp_vals, mapp_on = _block_values(mapp, MOBILE_APP_BLOCK, "mapp")
    sens_vals, sens_on = _block_values(sens, SENSOR_BLOCK, "sens")
    return FusedVector(
        user_id=present[0].user_id,
        minute_index=present[0].minute_index,
        pc_block=pc_vals,
        mobile_app_block=mapp_vals,
        sensor_block=sens_vals,
        active={"pc": pc_on, "mapp": mapp_on, "sens": sens_on},
    )


def fused_feature_names(pc_names: list[str], mapp_names: list[str], sens_names: list[str]) -> list[str]:
    if (len(pc_names), len(mapp_names), len(sens_names)) != (PC_BLOCK, MOBILE_APP_BLOCK, SENSOR_BLOCK):
        raise ValidationError(
            f"selected name lists must have widths {PC_BLOCK}/{MOBILE_APP_BLOCK}/{SENSOR_BLOCK}",
            field="feature_names",
        )
    return (
        [f"pc:{n}" for n in pc_names]
        + [f"mapp:{n}" for n in mapp_names]
        + [f"sens:{n}" for n in sens_names]
    )


def fuse_timeline(
    pc_vectors: list[MinuteFeatureVector],
    mapp_vectors: list[MinuteFeatureVector],
    sens_vectors: list[MinuteFeatureVector],
) -> list[FusedVector]:
    """Align per-device minute vectors on (user, minute) and fuse the union."""
    by_key: dict[tuple[str, int], list[MinuteFeatureVector | None]] = {}
    for slot, vectors in enumerate((pc_vectors, mapp_vectors, sens_vectors)):
        for vec in vectors:
            key = (vec.user_id, vec.minute_index)
            entry = by_key.setdefault(key, [None, None, None])
            entry[slot] = vec
    fused = []
    for key in sorted(by_key):
        pc, mapp, sens = by_key[key]
        fused.append(fuse_minute_vectors(pc, mapp, sens))
    return fused


def fused_dataset(
    fused: list[FusedVector],
    pc_names: list[str],
    mapp_names: list[str],
    sens_names: list[str],
) -> LabeledDataset:
    names = fused_feature_names(pc_names, mapp_names, sens_names)
    rows = np.stack([v.values() for v in fused]) if fused else np.zeros((0, FUSED_WIDTH))
    provenance = [
        "+".join(b for b, _ in _BLOCKS if v.active[b]) for v in fused
    ]
    return LabeledDataset(
        names,
        rows,
        [v.user_id for v in fused],
        np.array([v.minute_index for v in fused], dtype=np.int64),
        provenance,
    )
