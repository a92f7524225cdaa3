"""Mobile feature extraction: 13 app usage features and 40 sensor features.

App usage needs a per-(user, device) day accumulator that carries counters
across minutes and resets at UTC midnight. App id 0 is reserved as the
no-data sentinel. Sensor statistics cover both inertial sensors over the
channels X, Y, Z and magnitude.
"""

from __future__ import annotations

from collections import Counter, defaultdict
from dataclasses import dataclass, field

import numpy as np

from ..errors import ValidationError
from ..events.types import AppSample, SensorSample
from .apps import most_common_id
from .schema import CHANNELS, SENSOR_PREFIX, SENSORS, mobile_app_feature_names, sensor_feature_names
from .windows import MinuteWindow

MS_PER_DAY = 86_400_000

_ZERO_APP = {name: 0.0 for name in mobile_app_feature_names()}
_ZERO_SENSOR = {name: 0.0 for name in sensor_feature_names()}


@dataclass
class DayContext:
    """Running per-day app usage counters for one (user, device)."""

    user_id: str
    device_id: str
    day: int | None = None
    total: int = 0
    counts: Counter = field(default_factory=Counter)
    last_app: int = 0
    prev_of_last: int = 0
    pred_counts: dict[int, Counter] = field(default_factory=lambda: defaultdict(Counter))

    def reset(self, day: int) -> None:
        self.day = day
        self.total = 0
        self.counts = Counter()
        self.last_app = 0
        self.prev_of_last = 0
        self.pred_counts = defaultdict(Counter)

    def observe(self, app_id: int) -> None:
        self.total += 1
        self.counts[app_id] += 1
        if app_id != self.last_app:
            if self.last_app != 0:
                self.pred_counts[app_id][self.last_app] += 1
                self.prev_of_last = self.last_app
            self.last_app = app_id


def extract_mobile_app_features(window: MinuteWindow, day_context: DayContext) -> dict[str, float]:
    if window.device_kind != "mobile":
        raise ValidationError("mobile app features need a mobile window", field="device_kind")
    if day_context.user_id != window.user_id or day_context.device_id != window.device_id:
        raise ValidationError(
            f"day context belongs to ({day_context.user_id}, {day_context.device_id}), "
            f"window to ({window.user_id}, {window.device_id})",
            field="day_context",
        )

    samples = [ev.payload for ev in window.events if isinstance(ev.payload, AppSample)]
    out = dict(_ZERO_APP)
    if not samples:
        return out

    day = (window.minute_index * 60_000) // MS_PER_DAY
    if day_context.day != day:
        day_context.reset(day)
    for s in samples:
        day_context.observe(s.foreground_app_id)

    minute_ids = [s.foreground_app_id for s in samples]
    minute_counts = Counter(minute_ids)
    out["ma_min_distinct"] = float(len(minute_counts))
    out["ma_min_total"] = float(len(minute_ids))
    out["ma_day_distinct"] = float(len(day_context.counts))
    out["ma_day_total"] = float(day_context.total)
    top, top_n = most_common_id(minute_counts)
    out["ma_min_top_app"], out["ma_min_top_count"] = float(top), float(top_n)
    top, top_n = most_common_id(day_context.counts)
    out["ma_day_top_app"], out["ma_day_top_count"] = float(top), float(top_n)

    cur = minute_ids[-1]
    out["ma_cur_app"] = float(cur)
    out["ma_prev_app"] = float(day_context.prev_of_last)
    preds = day_context.pred_counts.get(cur)
    out["ma_pred_app"] = float(most_common_id(preds)[0]) if preds else 0.0
    out["ma_net_tx"] = float(sum(s.net_tx_bytes for s in samples))
    out["ma_net_rx"] = float(sum(s.net_rx_bytes for s in samples))
    return out


def extract_sensor_features(window: MinuteWindow) -> dict[str, float]:
    """Mean/max/min/population variance/peak-to-peak per sensor per channel."""
    if window.device_kind != "mobile":
        raise ValidationError("sensor features need a mobile window", field="device_kind")

    by_sensor: dict[str, list[SensorSample]] = defaultdict(list)
    for ev in window.events:
        if isinstance(ev.payload, SensorSample):
            by_sensor[ev.payload.sensor].append(ev.payload)

    out = dict(_ZERO_SENSOR)
    for sensor in SENSORS:
        samples = by_sensor.get(sensor)
        if not samples:
            continue
        xs = np.array([s.x for s in samples], dtype=float)
        ys = np.array([s.y for s in samples], dtype=float)
        zs = np.array([s.z for s in samples], dtype=float)
        mag = np.sqrt(xs * xs + ys * ys + zs * zs)
        for channel, arr in zip(CHANNELS, (xs, ys, zs, mag)):
            prefix = f"sn_{SENSOR_PREFIX[sensor]}_{channel}"
            out[f"{prefix}_mean"] = float(arr.mean())
            out[f"{prefix}_max"] = float(arr.max())
            out[f"{prefix}_min"] = float(arr.min())
            out[f"{prefix}_var"] = float(arr.var())
            out[f"{prefix}_ptp"] = float(arr.max() - arr.min())
    return out
