"""Usage-rhythm features over long windows: 32 values per window.

Input is a per-minute device-activity state in {none, pc, mobile, both}.
Device-change counters run over the de-duplicated non-idle state sequence,
where 'both' is its own state and breaks pc<->mobile transitions. Period
durations are maximal runs of (in)activity per family; inactivity runs
touching the window edges count too.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

import numpy as np

from ..errors import ValidationError
from ..features.stats import max0, mean0, min0, std0
from .dataset import LabeledDataset

SUPPORTED_WINDOWS = (60, 180, 360, 720, 1440)
STATES = ("none", "pc", "mobile", "both")

_FAMILIES = ("pc", "mobile", "both")

USAGE_FEATURE_NAMES = [
    "start_hour",
    "weekday",
    "pc_count",
    "mobile_count",
    "pc_to_mobile",
    "mobile_to_pc",
    "both_minutes",
    "none_minutes",
] + [
    f"{family}_{side}_{stat}"
    for family in _FAMILIES
    for side in ("active", "inactive")
    for stat in ("mean", "std", "max", "min")
]

assert len(USAGE_FEATURE_NAMES) == 32


@dataclass
class DerivedUsageVector:
    user_id: str
    window_start: int  # minute index of the window start
    features: dict[str, float]


def minute_weekday(minute_index: int) -> int:
    """0 = Monday; the epoch (1970-01-01) was a Thursday."""
    return (minute_index // 1440 + 3) % 7


def _run_lengths(flags: list[bool], want: bool) -> list[float]:
    runs, cur = [], 0
    for f in flags:
        if f == want:
            cur += 1
        elif cur:
            runs.append(float(cur))
            cur = 0
    if cur:
        runs.append(float(cur))
    return runs


def _period_stats(runs: list[float]) -> tuple[float, float, float, float]:
    # plain-sum arithmetic so results are bit-identical to a naive re-computation
    return mean0(runs), std0(runs), max0(runs), min0(runs)


def usage_window_features(states: list[str]) -> dict[str, float] | None:
    """The 30 activity-derived values for one window; None if fully idle.

    start_hour and weekday are added by the caller, which knows the window
    position on the timeline.
    """
    for s in states:
        if s not in STATES:
            raise ValidationError(f"unknown state {s!r}", field="states")
    if all(s == "none" for s in states):
        return None

    pc_active = [s in ("pc", "both") for s in states]
    mob_active = [s in ("mobile", "both") for s in states]
    both_active = [s == "both" for s in states]

    out = {
        "pc_count": float(sum(pc_active)),
        "mobile_count": float(sum(mob_active)),
        "both_minutes": float(sum(both_active)),
        "none_minutes": float(sum(1 for s in states if s == "none")),
    }

    dedup: list[str] = []
    for s in states:
        if s != "none" and (not dedup or s != dedup[-1]):
            dedup.append(s)
    out["pc_to_mobile"] = float(
        sum(1 for a, b in zip(dedup, dedup[1:]) if (a, b) == ("pc", "mobile"))
    )
    out["mobile_to_pc"] = float(
        sum(1 for a, b in zip(dedup, dedup[1:]) if (a, b) == ("mobile", "pc"))
    )

    for family, flags in (("pc", pc_active), ("mobile", mob_active), ("both", both_active)):
        for side, want in (("active", True), ("inactive", False)):
            mean, std, mx, mn = _period_stats(_run_lengths(flags, want))
            out[f"{family}_{side}_mean"] = mean
            out[f"{family}_{side}_std"] = std
            out[f"{family}_{side}_max"] = mx
            out[f"{family}_{side}_min"] = mn
    return out


def derive_usage_features(
    activity: Mapping[str, Mapping[int, str]],
    window_minutes: int,
) -> list[DerivedUsageVector]:
    """Tumbling-window usage vectors per user.

    `activity` maps user -> minute_index -> state; missing minutes are idle.
    Windows are aligned to multiples of window_minutes on the minute
    timeline; fully idle windows are skipped.
    """
    if window_minutes not in SUPPORTED_WINDOWS:
        raise ValidationError(
            f"window must be one of {SUPPORTED_WINDOWS}", field="window_minutes"
        )
    vectors = []
    for user in sorted(activity):
        minutes = activity[user]
        if not minutes:
            continue
        first = min(minutes) // window_minutes * window_minutes
        last = max(minutes)
        for start in range(first, last + 1, window_minutes):
            states = [minutes.get(m, "none") for m in range(start, start + window_minutes)]
            feats = usage_window_features(states)
            if feats is None:
                continue
            feats = {
                "start_hour": float((start // 60) % 24),
                "weekday": float(minute_weekday(start)),
                **feats,
            }
            vectors.append(DerivedUsageVector(user, start, feats))
    return vectors


def usage_dataset(vectors: list[DerivedUsageVector]) -> LabeledDataset:
    rows = (
        np.array([[v.features[n] for n in USAGE_FEATURE_NAMES] for v in vectors])
        if vectors
        else np.zeros((0, len(USAGE_FEATURE_NAMES)))
    )
    return LabeledDataset(
        list(USAGE_FEATURE_NAMES),
        rows,
        [v.user_id for v in vectors],
        np.array([v.window_start for v in vectors], dtype=np.int64),
        ["usage"] * len(vectors),
    )


def activity_map(
    pc_minutes: Mapping[str, set[int]], mobile_minutes: Mapping[str, set[int]]
) -> dict[str, dict[int, str]]:
    """Merge per-device active-minute sets into per-user state maps."""
    users = set(pc_minutes) | set(mobile_minutes)
    out: dict[str, dict[int, str]] = {}
    for user in users:
        pc = pc_minutes.get(user, set())
        mob = mobile_minutes.get(user, set())
        states = {}
        for m in pc | mob:
            if m in pc and m in mob:
                states[m] = "both"
            elif m in pc:
                states[m] = "pc"
            else:
                states[m] = "mobile"
        out[user] = states
    return out
