"""Random minute-window builders shared by the oracle tests and acceptance."""

from __future__ import annotations

import random

from contauth.events import AppSample, KeyEvent, MouseEvent, RawEvent, SensorSample
from contauth.features import MinuteWindow


def random_pc_window(rnd: random.Random, minute: int = 0) -> MinuteWindow:
    base = minute * 60_000
    events = []

    n_keys = rnd.randrange(0, 60)
    t = base + rnd.randrange(0, 500)
    for _ in range(n_keys):
        code = rnd.choice([8, 32, 127] + list(range(97, 123)))
        hold = rnd.randrange(0, 300)
        action = rnd.random()
        if action < 0.8:  # matched press/release
            if t + hold < base + 60_000:
                events.append(RawEvent(t, "d1", "u1", KeyEvent(code, "press")))
                events.append(RawEvent(t + hold, "d1", "u1", KeyEvent(code, "release")))
        elif action < 0.9:  # orphan press
            events.append(RawEvent(t, "d1", "u1", KeyEvent(code, "press")))
        else:  # orphan release
            events.append(RawEvent(t, "d1", "u1", KeyEvent(code, "release")))
        t += rnd.randrange(1, 900)
        if t >= base + 60_000:
            break

    n_moves = rnd.randrange(0, 50)
    t = base + rnd.randrange(0, 1000)
    x, y = rnd.uniform(0, 1920), rnd.uniform(0, 1080)
    for _ in range(n_moves):
        events.append(RawEvent(t, "d1", "u1", MouseEvent("move", "none", round(x, 1), round(y, 1))))
        if rnd.random() < 0.1:
            pass  # repeat same position later -> zero-length segment
        else:
            x = min(max(x + rnd.uniform(-200, 200), 0), 1920)
            y = min(max(y + rnd.uniform(-200, 200), 0), 1080)
        t += rnd.randrange(0, 400)  # occasionally zero-duration segments
        if t >= base + 60_000:
            break

    for _ in range(rnd.randrange(0, 8)):
        ct = base + rnd.randrange(0, 59_000)
        button = rnd.choice(["left", "left", "left", "right", "middle"])
        dur = rnd.randrange(5, 400)
        events.append(RawEvent(ct, "d1", "u1", MouseEvent("press", button, 1.0, 1.0)))
        if rnd.random() < 0.9:
            events.append(RawEvent(ct + dur, "d1", "u1", MouseEvent("release", button, 1.0, 1.0)))

    for k in range(rnd.randrange(0, 13)):
        events.append(
            RawEvent(
                base + k * 5_000 + rnd.randrange(0, 1000),
                "d1",
                "u1",
                AppSample(rnd.randrange(1, 40), rnd.random(), rnd.random(), rnd.randrange(0, 9999), rnd.randrange(0, 9999)),
            )
        )

    events.sort(key=lambda e: e.timestamp)
    return MinuteWindow("u1", "d1", "pc", minute, events)


def random_mobile_window(rnd: random.Random, minute: int = 0) -> MinuteWindow:
    base = minute * 60_000
    events = []
    for k in range(rnd.randrange(0, 13)):
        events.append(
            RawEvent(
                base + k * 5_000,
                "m1",
                "u1",
                AppSample(rnd.randrange(1, 20), rnd.random(), rnd.random(), rnd.randrange(0, 9999), rnd.randrange(0, 9999)),
            )
        )
    for sensor in ("accelerometer", "gyroscope"):
        if rnd.random() < 0.2:
            continue  # sometimes a sensor is absent
        for k in range(rnd.randrange(1, 40)):
            events.append(
                RawEvent(
                    base + k * 1_500,
                    "m1",
                    "u1",
                    SensorSample(sensor, rnd.uniform(-10, 10), rnd.uniform(-10, 10), rnd.uniform(-10, 10)),
                )
            )
    events.sort(key=lambda e: e.timestamp)
    return MinuteWindow("u1", "m1", "mobile", minute, events)
