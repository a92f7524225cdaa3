"""Application and resource usage features for PC minute windows: 17 values.

The "active applications" average is the running count of distinct
foreground apps seen so far in the window, averaged over sampling ticks.
App id slots use 0 as the no-data sentinel.
"""

from __future__ import annotations

from collections import Counter

from ..errors import ValidationError
from ..events.types import AppSample
from .schema import app_resource_feature_names
from .stats import max0, mean0, std0
from .windows import MinuteWindow

_ZERO = {name: 0.0 for name in app_resource_feature_names()}


def most_common_id(counts: Counter) -> tuple[int, int]:
    """(app id, count) with the highest count; ties go to the smallest id."""
    if not counts:
        return 0, 0
    best = sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))[0]
    return best[0], best[1]


def extract_app_resource_features(window: MinuteWindow) -> dict[str, float]:
    if window.device_kind != "pc":
        raise ValidationError("app/resource features need a pc window", field="device_kind")

    samples = [ev.payload for ev in window.events if isinstance(ev.payload, AppSample)]
    out = dict(_ZERO)
    if not samples:
        return out

    ids = [s.foreground_app_id for s in samples]
    out["ar_last_app"] = float(ids[-1])
    penult = 0
    for app in reversed(ids[:-1]):
        if app != ids[-1]:
            penult = app
            break
    out["ar_penult_app"] = float(penult)

    seen: set[int] = set()
    running = []
    for app in ids:
        seen.add(app)
        running.append(len(seen))
    out["ar_active_apps_mean"] = mean0(running)
    out["ar_app_changes"] = float(sum(1 for i in range(1, len(ids)) if ids[i] != ids[i - 1]))

    cpu = [s.cpu_pct for s in samples]
    ram = [s.ram_pct for s in samples]
    out["ar_cpu_mean"] = mean0(cpu)
    out["ar_cpu_std"] = std0(cpu)
    out["ar_cpu_max"] = max0(cpu)
    out["ar_ram_mean"] = mean0(ram)
    out["ar_ram_std"] = std0(ram)
    out["ar_ram_max"] = max0(ram)
    tx = float(sum(s.net_tx_bytes for s in samples))
    rx = float(sum(s.net_rx_bytes for s in samples))
    out["ar_net_tx"] = tx
    out["ar_net_rx"] = rx
    out["ar_net_total"] = tx + rx
    out["ar_samples"] = float(len(samples))
    out["ar_distinct_apps"] = float(len(seen))
    top_id, top_count = most_common_id(Counter(ids))
    out["ar_most_common_app"] = float(top_id)
    out["ar_most_common_count"] = float(top_count)
    return out
