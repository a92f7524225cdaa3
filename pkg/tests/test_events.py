import pytest

from contauth.errors import ValidationError
from contauth.events import (
    KeyEvent,
    MouseProfile,
    SensorProfile,
    TypingProfile,
    UserProfile,
    demo_profiles,
    generate_stream,
    read_event_log,
    write_event_log,
)


def small_profile(**overrides):
    base = dict(
        user_id="u1",
        devices={"pc1": "pc", "mob1": "mobile"},
        typing=TypingProfile(80.0, 200.0, 15.0, 0.05, {97: 0.4, 98: 0.4, 32: 0.2}),
        mouse=MouseProfile(400.0, 10.0, [0.125] * 8),
        apps={"pc1": {10: 0.6, 11: 0.4}, "mob1": {100: 0.5, 101: 0.5}},
        sensors={
            "accelerometer": SensorProfile((0.5, 1.0, 9.5), (0.3, 0.3, 0.4)),
            "gyroscope": SensorProfile((0.0, 0.0, 0.0), (0.05, 0.05, 0.05)),
        },
        schedule={"pc1": [1.0] * 24, "mob1": [1.0] * 24},
    )
    base.update(overrides)
    return UserProfile(**base)


class TestGenerateStream:
    def test_deterministic(self):
        p = small_profile()
        a = generate_stream(p, start=0, duration=3, seed=7)
        b = generate_stream(p, start=0, duration=3, seed=7)
        assert a == b
        c = generate_stream(p, start=0, duration=3, seed=8)
        assert a != c

    def test_sorted_and_nonempty(self):
        events = generate_stream(small_profile(), start=0, duration=2, seed=1)
        assert events
        ts = [e.timestamp for e in events]
        assert ts == sorted(ts)

    def test_all_zero_schedule_is_empty(self):
        p = small_profile(schedule={"pc1": [0.0] * 24, "mob1": [0.0] * 24})
        assert generate_stream(p, start=0, duration=10, seed=3) == []

    def test_duration_rejected(self):
        with pytest.raises(ValidationError, match="duration"):
            generate_stream(small_profile(), start=0, duration=0, seed=1)

    def test_invalid_distribution_names_field(self):
        p = small_profile(typing=TypingProfile(80, 200, 15, 0.05, {97: 0.5, 98: 0.6}))
        with pytest.raises(ValidationError, match="typing.vocabulary"):
            generate_stream(p, start=0, duration=1, seed=1)

    def test_flight_interval_within_ten_percent(self):
        # flight gaps are release-to-press within typing runs; ignore idle gaps
        p = small_profile(
            devices={"pc1": "pc"},
            typing=TypingProfile(80.0, 200.0, 15.0, 0.0, {97: 0.8, 32: 0.2}),
            apps={"pc1": {10: 1.0}},
            schedule={"pc1": [1.0] * 24},
        )
        events = generate_stream(p, start=0, duration=60, seed=11)
        keys = [(e.timestamp, e.payload.action) for e in events if isinstance(e.payload, KeyEvent)]
        gaps = []
        for i in range(1, len(keys)):
            if keys[i][1] == "press" and keys[i - 1][1] == "release":
                gap = keys[i][0] - keys[i - 1][0]
                if gap < 2000:
                    gaps.append(gap)
        assert len(gaps) > 1000
        mean = sum(gaps) / len(gaps)
        assert 180.0 <= mean <= 220.0

    def test_schedule_respected_in_expectation(self):
        p = small_profile(
            devices={"pc1": "pc"},
            apps={"pc1": {10: 1.0}},
            schedule={"pc1": [0.5] * 24},
        )
        events = generate_stream(p, start=0, duration=400, seed=5)
        active = {e.timestamp // 60000 for e in events}
        assert 140 <= len(active) <= 260  # 400 * 0.5 give or take

    def test_hold_separation_property(self):
        jitter = 10.0
        lo = small_profile(typing=TypingProfile(60.0, 200.0, jitter, 0.0, {97: 0.8, 32: 0.2}))
        hi = small_profile(typing=TypingProfile(60.0 + 3 * jitter + 5, 200.0, jitter, 0.0, {97: 0.8, 32: 0.2}))
        for seed in range(5):
            means = []
            for p in (lo, hi):
                events = generate_stream(p, start=0, duration=5, seed=seed)
                holds = _mean_hold(events)
                means.append(holds)
            assert means[1] > means[0]


def _mean_hold(events):
    open_press = {}
    holds = []
    for e in events:
        if not isinstance(e.payload, KeyEvent):
            continue
        key = (e.device_id, e.payload.key_code)
        if e.payload.action == "press":
            open_press.setdefault(key, []).append(e.timestamp)
        elif open_press.get(key):
            holds.append(e.timestamp - open_press[key].pop(0))
    return sum(holds) / len(holds)


class TestEventLog:
    def test_roundtrip(self, tmp_path):
        events = generate_stream(small_profile(), start=0, duration=2, seed=4)
        path = tmp_path / "events.csv"
        n = write_event_log(events, path)
        assert n == len(events)
        back = read_event_log(path)
        assert back == events

    def test_header_required(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("1,2,3\n")
        with pytest.raises(ValidationError, match="header"):
            read_event_log(path)

    def test_parse_error_carries_line_number(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text(
            "timestamp,user_id,device_id,payload_kind,p1,p2,p3,p4,p5\n"
            "100,u1,d1,key,97,press,,,\n"
            "200,u1,d1,key,notanint,press,,,\n"
        )
        with pytest.raises(ValidationError, match="line 3"):
            read_event_log(path)


class TestDemoProfiles:
    def test_valid_and_distinct(self):
        profiles = demo_profiles()
        assert len(profiles) == 5
        for p in profiles:
            p.validate()
        assert len({p.user_id for p in profiles}) == 5

    def test_roundtrip_via_dict(self):
        p = demo_profiles()[0]
        q = UserProfile.from_dict(p.to_dict())
        assert q.to_dict() == p.to_dict()

    def test_feeds_generator(self):
        p = demo_profiles()[2]  # active 11:00-13:00
        events = generate_stream(p, start=11 * 3_600_000, duration=120, seed=0)
        assert len(events) > 100
