"""Sliding sequence windows over the fused minute timeline.

The timeline for one user is a dense minute grid over a contiguous period;
minutes without activity are filled with -1 in every feature slot. Windows
are stride-1 views materialized on demand so long windows stay cheap.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import ValidationError
from .fusion import FUSED_WIDTH, FusedVector

SUPPORTED_SEQUENCE_LENGTHS = (2, 5, 10, 20, 30, 60, 90, 120, 180, 240, 360)
FILL_VALUE = -1.0


@dataclass
class UserTimeline:
    user_id: str
    start_minute: int
    length: int  # N minutes
    width: int = FUSED_WIDTH
    active: dict[int, np.ndarray] = field(default_factory=dict)  # offset -> row

    def __post_init__(self):
        if self.length < 1:
            raise ValidationError("timeline must span >= 1 minute", field="length")
        for off, row in self.active.items():
            if not 0 <= off < self.length:
                raise ValidationError(f"active minute {off} outside timeline", field="active")
            if row.shape != (self.width,):
                raise ValidationError("row width mismatch", field="active")

    @classmethod
    def from_fused(
        cls,
        fused: list[FusedVector],
        start_minute: int | None = None,
        length: int | None = None,
    ) -> "UserTimeline":
        users = {v.user_id for v in fused}
        if len(users) != 1:
            raise ValidationError(f"one user per timeline, got {sorted(users)}", field="fused")
        minutes = [v.minute_index for v in fused]
        if start_minute is None:
            start_minute = min(minutes)
        if length is None:
            length = max(minutes) - start_minute + 1
        active = {}
        for v in fused:
            off = v.minute_index - start_minute
            if 0 <= off < length:
                active[off] = v.values()
        return cls(users.pop(), start_minute, length, FUSED_WIDTH, active)

    def row(self, offset: int) -> np.ndarray:
        got = self.active.get(offset)
        if got is None:
            return np.full(self.width, FILL_VALUE)
        return got

    def window(self, offset: int, T: int) -> np.ndarray:
        out = np.full((T, self.width), FILL_VALUE)
        for t in range(T):
            row = self.active.get(offset + t)
            if row is not None:
                out[t] = row
        return out

    def active_in(self, offset: int, T: int) -> bool:
        return any(offset + t in self.active for t in range(T))


@dataclass
class SequenceWindow:
    user_id: str
    start_minute: int
    length: int
    matrix: np.ndarray  # (T, width)


class SequenceDataset:
    """Lazily materialized (window, label) pairs across one or more timelines."""

    def __init__(self, T: int, width: int = FUSED_WIDTH):
        self.T = T
        self.width = width
        self._refs: list[tuple[UserTimeline, int]] = []

    def __len__(self) -> int:
        return len(self._refs)

    def add(self, timeline: UserTimeline, offset: int) -> None:
        if timeline.width != self.width:
            raise ValidationError("timeline width mismatch", field="timeline")
        self._refs.append((timeline, offset))

    def label(self, i: int) -> str:
        return self._refs[i][0].user_id

    @property
    def labels(self) -> list[str]:
        return [tl.user_id for tl, _ in self._refs]

    def window(self, i: int) -> SequenceWindow:
        tl, off = self._refs[i]
        return SequenceWindow(tl.user_id, tl.start_minute + off, self.T, tl.window(off, self.T))

    def matrix(self, i: int) -> np.ndarray:
        tl, off = self._refs[i]
        return tl.window(off, self.T)

    def batch(self, idx) -> np.ndarray:
        return np.stack([self.matrix(int(i)) for i in idx])

    def is_active(self, i: int) -> bool:
        tl, off = self._refs[i]
        return tl.active_in(off, self.T)

    def active(self) -> "SequenceDataset":
        out = SequenceDataset(self.T, self.width)
        out._refs = [r for i, r in enumerate(self._refs) if self.is_active(i)]
        return out

    def subset(self, idx) -> "SequenceDataset":
        out = SequenceDataset(self.T, self.width)
        out._refs = [self._refs[int(i)] for i in idx]
        return out

    def classes(self) -> list[str]:
        return sorted(set(self.labels))


def build_sequences(timeline: UserTimeline, T: int) -> SequenceDataset:
    """All stride-1 windows of length T over one user's timeline: N - T + 1."""
    if T < 2:
        raise ValidationError("must be >= 2", field="T")
    if T > timeline.length:
        raise ValidationError(f"T={T} exceeds timeline length {timeline.length}", field="T")
    ds = SequenceDataset(T, timeline.width)
    for off in range(timeline.length - T + 1):
        ds.add(timeline, off)
    return ds


def concat_sequences(parts: list[SequenceDataset]) -> SequenceDataset:
    if not parts:
        raise ValidationError("nothing to concatenate", field="parts")
    T, width = parts[0].T, parts[0].width
    out = SequenceDataset(T, width)
    for p in parts:
        if p.T != T or p.width != width:
            raise ValidationError("mixed window shapes", field="parts")
        out._refs.extend(p._refs)
    return out
