import datetime
import random

import pytest

from contauth.errors import ValidationError
from contauth.pipeline import (
    USAGE_FEATURE_NAMES,
    derive_usage_features,
    usage_dataset,
    usage_window_features,
)
from contauth.pipeline.usage import minute_weekday

from oracles import oracle_usage


class TestUsageWindow:
    def test_seven_minute_example(self):
        states = ["pc", "pc", "both", "mobile", "none", "pc", "pc"]
        f = usage_window_features(states)
        assert f["pc_count"] == 5
        assert f["mobile_count"] == 2
        assert f["both_minutes"] == 1
        assert f["mobile_to_pc"] == 1
        assert f["pc_to_mobile"] == 0
        assert f["pc_active_mean"] == pytest.approx(2.5)
        assert f["pc_active_std"] == pytest.approx(0.5)
        assert f["pc_active_max"] == 3
        assert f["pc_active_min"] == 2

    def test_all_none_skipped(self):
        assert usage_window_features(["none"] * 10) is None

    def test_single_device_whole_window(self):
        f = usage_window_features(["pc"] * 8)
        assert f["mobile_count"] == 0
        assert f["mobile_active_mean"] == 0
        assert f["mobile_active_max"] == 0
        assert f["pc_to_mobile"] == 0
        assert f["mobile_to_pc"] == 0
        assert f["pc_active_mean"] == 8
        assert f["mobile_inactive_mean"] == 8

    def test_change_counters_ignore_leading_trailing_none(self):
        core = ["pc", "mobile", "both", "mobile", "pc"]
        base = usage_window_features(core)
        padded = usage_window_features(["none"] * 3 + core + ["none"] * 4)
        for key in ("pc_to_mobile", "mobile_to_pc"):
            assert base[key] == padded[key]

    def test_matches_oracle_on_random_bitmaps(self):
        rnd = random.Random(123)
        for _ in range(300):
            n = rnd.randrange(1, 120)
            states = [rnd.choice(["none", "pc", "mobile", "both"]) for _ in range(n)]
            expected = oracle_usage(states)
            actual = usage_window_features(states)
            if expected is None:
                assert actual is None
                continue
            for key, val in expected.items():
                assert actual[key] == pytest.approx(val, abs=0), key

    def test_unknown_state_rejected(self):
        with pytest.raises(ValidationError, match="state"):
            usage_window_features(["pc", "laptop"])


class TestDeriveUsage:
    def test_window_size_validated(self):
        with pytest.raises(ValidationError, match="window"):
            derive_usage_features({"u1": {0: "pc"}}, window_minutes=90)

    def test_tumbling_alignment_and_metadata(self):
        activity = {"u1": {59: "pc", 60: "mobile", 150: "both"}}
        vectors = derive_usage_features(activity, window_minutes=60)
        starts = [v.window_start for v in vectors]
        assert starts == [0, 60, 120]
        assert vectors[0].features["start_hour"] == 0
        assert vectors[1].features["start_hour"] == 1
        assert all(v.user_id == "u1" for v in vectors)

    def test_idle_windows_skipped(self):
        activity = {"u1": {0: "pc", 1440: "pc"}}
        vectors = derive_usage_features(activity, window_minutes=60)
        assert [v.window_start for v in vectors] == [0, 1440]

    def test_weekday_matches_datetime(self):
        for minute in (0, 1440, 2 * 1440 + 77, 1_000_000, 28_000_000):
            expected = datetime.datetime.fromtimestamp(
                minute * 60, tz=datetime.timezone.utc
            ).weekday()
            assert minute_weekday(minute) == expected

    def test_dataset_has_32_features(self):
        vectors = derive_usage_features({"u1": {0: "pc", 5: "mobile"}}, window_minutes=60)
        ds = usage_dataset(vectors)
        assert ds.n_features == 32
        assert ds.feature_names == USAGE_FEATURE_NAMES
