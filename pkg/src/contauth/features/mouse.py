"""Mouse feature extraction for PC minute windows: exactly 45 values.

Movement segments are consecutive pairs of move events. Direction sectors
are 45 degrees wide, measured with +y pointing up; a vector exactly on a
boundary belongs to the counter-clockwise (higher) sector. Zero-length
segments contribute to the length histogram but not to direction stats;
zero-duration segments contribute no speed sample.
"""

from __future__ import annotations

import math
from collections import defaultdict, deque

from ..errors import ValidationError
from ..events.types import MouseEvent
from .schema import BUTTONS, DOUBLE_CLICK_MAX_GAP_MS, MOVE_LENGTH_BINS, SECTOR_NAMES, mouse_feature_names
from .stats import max0, mean0, std0
from .windows import MinuteWindow

_ZERO = {name: 0.0 for name in mouse_feature_names()}


def direction_sector(dx: float, dy: float) -> int:
    """Sector index 0..7 for a non-zero movement vector."""
    angle = math.degrees(math.atan2(dy, dx)) % 360.0
    return min(int(angle // 45.0), 7)


def length_bin(dist: float) -> int:
    for i, edge in enumerate(MOVE_LENGTH_BINS):
        if dist < edge:
            return i
    return len(MOVE_LENGTH_BINS)


def extract_mouse_features(window: MinuteWindow) -> dict[str, float]:
    if window.device_kind != "pc":
        raise ValidationError("mouse features need a pc window", field="device_kind")

    moves: list[tuple[int, float, float]] = []
    press_pending: dict[str, deque[int]] = defaultdict(deque)
    click_durations: dict[str, list[float]] = {b: [] for b in BUTTONS}
    left_press_times: list[int] = []
    for ev in window.events:
        p = ev.payload
        if not isinstance(p, MouseEvent):
            continue
        if p.kind == "move":
            moves.append((ev.timestamp, p.x, p.y))
        elif p.kind == "press" and p.button in BUTTONS:
            press_pending[p.button].append(ev.timestamp)
            if p.button == "left":
                left_press_times.append(ev.timestamp)
        elif p.kind == "release" and p.button in BUTTONS and press_pending[p.button]:
            click_durations[p.button].append(float(ev.timestamp - press_pending[p.button].popleft()))

    out = dict(_ZERO)
    out["ms_move_events"] = float(len(moves))

    lengths: list[float] = []
    speeds: list[float] = []
    durations: list[float] = []
    sector_speeds: dict[int, list[float]] = defaultdict(list)
    sector_dist: dict[int, float] = defaultdict(float)
    for i in range(len(moves) - 1):
        t0, x0, y0 = moves[i]
        t1, x1, y1 = moves[i + 1]
        dx, dy = x1 - x0, y1 - y0
        dist = math.hypot(dx, dy)
        dt_s = (t1 - t0) / 1000.0
        lengths.append(dist)
        durations.append(dt_s)
        out[f"ms_len_hist_{length_bin(dist)}"] += 1.0
        if dist > 0:
            sector = direction_sector(dx, dy)
            sector_dist[sector] += dist
            if dt_s > 0:
                speed = dist / dt_s
                speeds.append(speed)
                sector_speeds[sector].append(speed)
        elif dt_s > 0:
            speeds.append(0.0)

    out["ms_segments"] = float(len(lengths))
    out["ms_total_dist"] = sum(lengths)
    out["ms_len_mean"] = mean0(lengths)
    out["ms_len_std"] = std0(lengths)
    out["ms_len_max"] = max0(lengths)
    out["ms_speed_mean"] = mean0(speeds)
    out["ms_speed_std"] = std0(speeds)
    out["ms_speed_max"] = max0(speeds)
    out["ms_dur_mean"] = mean0(durations)
    out["ms_dur_std"] = std0(durations)
    out["ms_moving_time"] = sum(durations)
    for sector, name in enumerate(SECTOR_NAMES):
        out[f"ms_speed_{name}"] = mean0(sector_speeds.get(sector, []))
        out[f"ms_dist_{name}"] = sector_dist.get(sector, 0.0)

    for button in BUTTONS:
        durs = click_durations[button]
        out[f"ms_click_n_{button}"] = float(len(durs))
        out[f"ms_click_dur_mean_{button}"] = mean0(durs)
        out[f"ms_click_dur_std_{button}"] = std0(durs)

    gaps = [
        float(left_press_times[i + 1] - left_press_times[i])
        for i in range(len(left_press_times) - 1)
        if left_press_times[i + 1] - left_press_times[i] <= DOUBLE_CLICK_MAX_GAP_MS
    ]
    out["ms_dclick_n"] = float(len(gaps))
    out["ms_dclick_gap_mean"] = mean0(gaps)
    out["ms_dclick_gap_std"] = std0(gaps)
    return out
