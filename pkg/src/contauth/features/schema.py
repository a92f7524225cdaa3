"""Feature schema registry.

Per-minute vectors carry an ordered name -> value map. PC vectors have a
fixed dense part (keyboard counters/histograms, 45 mouse features, 17
app/resource features) plus sparse digraph entries for the key pairs actually
typed; densifying the digraph space across a corpus is what blows the PC
dataset up to thousands of columns. Mobile vectors are fully dense: 13 app
usage features plus 40 sensor features.
"""

from __future__ import annotations

from dataclasses import dataclass

PC_SCHEMA_ID = "pc.1"
MOBILE_SCHEMA_ID = "mobile.1"

DIGRAPH_COUNT_PREFIX = "kb_dg_n_"
DIGRAPH_TIME_PREFIX = "kb_dg_t_"

SECTOR_NAMES = ("right", "up_right", "up", "up_left", "left", "down_left", "down", "down_right")
MOVE_LENGTH_BINS = (10.0, 50.0, 150.0, 400.0)  # upper edges; final bin is open
DOUBLE_CLICK_MAX_GAP_MS = 500.0
BUTTONS = ("left", "right", "middle")

SENSORS = ("accelerometer", "gyroscope")
SENSOR_PREFIX = {"accelerometer": "acc", "gyroscope": "gyr"}
CHANNELS = ("x", "y", "z", "mag")
SENSOR_STATS = ("mean", "max", "min", "var", "ptp")


def keyboard_feature_names() -> list[str]:
    names = [
        "kb_keystrokes",
        "kb_words",
        "kb_erase_pct",
        "kb_hold_mean",
        "kb_hold_std",
        "kb_interval_mean",
        "kb_interval_std",
    ]
    names += [f"kb_key_{k}" for k in range(128)]
    names += [f"kb_wordlen_{n}" for n in range(1, 21)]
    names.append("kb_wordlen_20p")
    return names


def mouse_feature_names() -> list[str]:
    names = [
        "ms_move_events",
        "ms_segments",
        "ms_total_dist",
        "ms_len_mean",
        "ms_len_std",
        "ms_len_max",
        "ms_speed_mean",
        "ms_speed_std",
        "ms_speed_max",
        "ms_dur_mean",
        "ms_dur_std",
        "ms_moving_time",
    ]
    names += [f"ms_speed_{s}" for s in SECTOR_NAMES]
    names += [f"ms_dist_{s}" for s in SECTOR_NAMES]
    names += [f"ms_len_hist_{b}" for b in range(len(MOVE_LENGTH_BINS) + 1)]
    for b in BUTTONS:
        names += [f"ms_click_n_{b}", f"ms_click_dur_mean_{b}", f"ms_click_dur_std_{b}"]
    names += ["ms_dclick_n", "ms_dclick_gap_mean", "ms_dclick_gap_std"]
    return names


def app_resource_feature_names() -> list[str]:
    return [
        "ar_last_app",
        "ar_penult_app",
        "ar_active_apps_mean",
        "ar_app_changes",
        "ar_cpu_mean",
        "ar_cpu_std",
        "ar_ram_mean",
        "ar_ram_std",
        "ar_net_tx",
        "ar_net_rx",
        "ar_samples",
        "ar_distinct_apps",
        "ar_most_common_app",
        "ar_most_common_count",
        "ar_cpu_max",
        "ar_ram_max",
        "ar_net_total",
    ]


def mobile_app_feature_names() -> list[str]:
    return [
        "ma_min_distinct",
        "ma_min_total",
        "ma_day_distinct",
        "ma_day_total",
        "ma_min_top_app",
        "ma_min_top_count",
        "ma_day_top_app",
        "ma_day_top_count",
        "ma_cur_app",
        "ma_prev_app",
        "ma_pred_app",
        "ma_net_tx",
        "ma_net_rx",
    ]


def sensor_feature_names() -> list[str]:
    return [
        f"sn_{SENSOR_PREFIX[s]}_{c}_{stat}"
        for s in SENSORS
        for c in CHANNELS
        for stat in SENSOR_STATS
    ]


PC_DENSE_NAMES = keyboard_feature_names() + mouse_feature_names() + app_resource_feature_names()
MOBILE_NAMES = mobile_app_feature_names() + sensor_feature_names()

# categorical columns (integer ids) needing one-hot encoding downstream
PC_CATEGORICAL = ("ar_last_app", "ar_penult_app", "ar_most_common_app")
MOBILE_APP_CATEGORICAL = ("ma_min_top_app", "ma_day_top_app", "ma_cur_app", "ma_prev_app", "ma_pred_app")

assert len(mouse_feature_names()) == 45
assert len(app_resource_feature_names()) == 17
assert len(mobile_app_feature_names()) == 13
assert len(sensor_feature_names()) == 40


def digraph_count_name(a: int, b: int) -> str:
    return f"{DIGRAPH_COUNT_PREFIX}{a}_{b}"


def digraph_time_name(a: int, b: int) -> str:
    return f"{DIGRAPH_TIME_PREFIX}{a}_{b}"


def is_digraph_name(name: str) -> bool:
    return name.startswith(DIGRAPH_COUNT_PREFIX) or name.startswith(DIGRAPH_TIME_PREFIX)


@dataclass
class MinuteFeatureVector:
    """Aggregated features for one (user, device, minute)."""

    user_id: str
    device_kind: str
    minute_index: int
    features: dict[str, float]
    schema_id: str

    def check_schema(self) -> None:
        """Assert the vector's names match its registered schema."""
        if self.schema_id == MOBILE_SCHEMA_ID:
            if list(self.features) != MOBILE_NAMES:
                raise AssertionError("mobile vector names do not match schema")
        elif self.schema_id == PC_SCHEMA_ID:
            names = list(self.features)
            if names[: len(PC_DENSE_NAMES)] != PC_DENSE_NAMES:
                raise AssertionError("pc vector dense names do not match schema")
            for extra in names[len(PC_DENSE_NAMES):]:
                if not is_digraph_name(extra):
                    raise AssertionError(f"unexpected pc feature {extra!r}")
        else:
            raise AssertionError(f"unknown schema {self.schema_id!r}")
