import math

import pytest

from contauth.errors import ValidationError
from contauth.events import KeyEvent, RawEvent, replay


def key(ts, code=97, action="press", device="d1"):
    return RawEvent(ts, device, "u1", KeyEvent(code, action))


def test_empty_input_completes_immediately():
    assert list(replay([], speed=2.0)) == []


def test_identity_roundtrip():
    events = [key(0), key(100, action="release"), key(200)]
    assert list(replay(events, speed=math.inf)) == events


def test_speed_two_halves_gaps():
    events = [key(0), key(100), key(200)]
    sleeps = []
    out = list(replay(events, speed=2.0, sleep=sleeps.append))
    assert out == events
    assert sleeps == pytest.approx([0.05, 0.05])


def test_infinite_speed_never_sleeps():
    events = [key(0), key(5_000), key(90_000)]
    sleeps = []
    list(replay(events, speed=math.inf, sleep=sleeps.append))
    assert sleeps == []


def test_unsorted_rejected_with_index():
    events = [key(0), key(100), key(50)]
    with pytest.raises(ValidationError, match="index 2"):
        list(replay(events, speed=math.inf))


def test_nonpositive_speed_rejected():
    with pytest.raises(ValidationError, match="speed"):
        list(replay([key(0)], speed=0.0))
