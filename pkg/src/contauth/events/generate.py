"""Synthetic behavioural event generator.

Stands in for real client apps: given a user profile it produces a
deterministic, timestamp-sorted stream of raw events across the user's
devices. Typing is modelled as alternating hold/flight Gaussians truncated at
zero, mouse paths as straight segments between waypoints, app usage as a
sticky categorical process sampled on a fixed grid, and sensors as per-axis
Gaussians at a fixed rate.
"""

from __future__ import annotations

import math
from typing import Iterator

import numpy as np

from ..errors import ValidationError
from .profiles import UserProfile
from .types import AppSample, KeyEvent, MouseEvent, RawEvent, SensorSample

MINUTE_MS = 60_000
APP_SAMPLE_PERIOD_MS = 5_000
SENSOR_HZ = 5.0
MOUSE_MOVE_HZ = 20.0

SCREEN_W, SCREEN_H = 1920, 1080
CLICK_BUTTON_WEIGHTS = {"left": 0.80, "right": 0.15, "middle": 0.05}
DOUBLE_CLICK_PROB = 0.25
APP_SWITCH_PROB = 0.2


def generate_stream(
    profile: UserProfile, start: int, duration: int, seed: int
) -> list[RawEvent]:
    """Materialized event stream; see iter_stream for the lazy form."""
    return list(iter_stream(profile, start, duration, seed))


def iter_stream(
    profile: UserProfile, start: int, duration: int, seed: int
) -> Iterator[RawEvent]:
    """Yield events for `duration` minutes starting at epoch-ms `start`.

    Deterministic for a fixed (profile, start, duration, seed). Each
    (device, absolute minute) pair gets its own seeded RNG, so chunked
    generation over adjacent ranges concatenates to the single long stream.
    """
    profile.validate()
    if duration < 1:
        raise ValidationError("must be >= 1 minute", field="duration")
    if start < 0:
        raise ValidationError("must be >= 0", field="start")

    seed64 = seed & 0xFFFFFFFFFFFFFFFF
    devices = sorted(profile.devices)
    for m in range(duration):
        minute_start = start + m * MINUTE_MS
        hour = (minute_start // 3_600_000) % 24
        minute_abs = minute_start // MINUTE_MS
        batch: list[RawEvent] = []
        for dev_idx, dev in enumerate(devices):
            prob = 0.0
            sched = profile.schedule.get(dev)
            if sched is not None:
                prob = sched[hour]
            rng = np.random.default_rng(np.random.SeedSequence([seed64, dev_idx, minute_abs]))
            if rng.random() >= prob:
                continue
            if profile.devices[dev] == "pc":
                batch.extend(_pc_minute(profile, dev, minute_start, rng))
            else:
                batch.extend(_mobile_minute(profile, dev, minute_start, rng))
        batch.sort(key=lambda ev: ev.timestamp)
        yield from batch


def _trunc_gauss(rng: np.random.Generator, mean: float, std: float) -> float:
    return max(0.0, float(rng.normal(mean, std)))


def _pc_minute(
    profile: UserProfile, device: str, minute_start: int, rng: np.random.Generator
) -> list[RawEvent]:
    uid = profile.user_id
    end = minute_start + MINUTE_MS
    out: list[RawEvent] = []

    # keyboard: press, hold, release, flight, press, ...
    t = profile.typing
    codes = sorted(t.vocabulary)
    weights = np.array([t.vocabulary[c] for c in codes])
    weights = weights / weights.sum()
    now = minute_start + float(rng.uniform(0, 500))
    while True:
        hold = _trunc_gauss(rng, t.mean_hold_ms, t.jitter_ms)
        if now + hold >= end:
            break
        if rng.random() < t.erase_rate:
            code = 8
        else:
            code = int(rng.choice(codes, p=weights))
        out.append(RawEvent(int(now), device, uid, KeyEvent(code, "press")))
        out.append(RawEvent(int(now + hold), device, uid, KeyEvent(code, "release")))
        flight = _trunc_gauss(rng, t.mean_flight_ms, t.jitter_ms)
        now += hold + flight

    # mouse movement: a few straight-segment episodes per minute
    mo = profile.mouse
    bias = np.array(mo.direction_bias, dtype=float)
    bias = bias / bias.sum()
    step_ms = 1000.0 / MOUSE_MOVE_HZ
    for _ in range(int(rng.integers(2, 5))):
        ep_t = minute_start + float(rng.uniform(0, 54_000))
        x = float(rng.uniform(400, SCREEN_W - 400))
        y = float(rng.uniform(200, SCREEN_H - 200))
        out.append(RawEvent(int(ep_t), device, uid, MouseEvent("move", "none", round(x, 1), round(y, 1))))
        for _ in range(int(rng.integers(1, 4))):  # waypoints
            sector = int(rng.choice(8, p=bias))
            angle = math.radians(sector * 45.0 + float(rng.uniform(2.0, 43.0)))
            length = float(rng.uniform(60, 360))
            speed = max(20.0, float(rng.normal(mo.mean_speed_px_s, mo.mean_speed_px_s * 0.15)))
            steps = max(1, int(round(length / speed * MOUSE_MOVE_HZ)))
            dx = math.cos(angle) * length / steps
            dy = math.sin(angle) * length / steps
            for _ in range(steps):
                ep_t += step_ms
                x = min(max(x + dx, 0.0), float(SCREEN_W))
                y = min(max(y + dy, 0.0), float(SCREEN_H))
                if ep_t >= end:
                    break
                out.append(RawEvent(int(ep_t), device, uid, MouseEvent("move", "none", round(x, 1), round(y, 1))))
            if ep_t >= end:
                break

    # clicks; press times leave room for release and a possible double click
    n_clicks = int(rng.poisson(mo.click_rate_per_min))
    buttons = list(CLICK_BUTTON_WEIGHTS)
    b_weights = np.array(list(CLICK_BUTTON_WEIGHTS.values()))
    for _ in range(n_clicks):
        ct = minute_start + float(rng.uniform(0, MINUTE_MS - 1000))
        button = buttons[int(rng.choice(3, p=b_weights))]
        cx = float(rng.uniform(0, SCREEN_W))
        cy = float(rng.uniform(0, SCREEN_H))
        dur = max(5.0, float(rng.normal(90, 25)))
        out.append(RawEvent(int(ct), device, uid, MouseEvent("press", button, round(cx, 1), round(cy, 1))))
        out.append(RawEvent(int(ct + dur), device, uid, MouseEvent("release", button, round(cx, 1), round(cy, 1))))
        if button == "left" and rng.random() < DOUBLE_CLICK_PROB:
            gap = float(rng.uniform(120, 350))
            dur2 = max(5.0, float(rng.normal(90, 25)))
            out.append(RawEvent(int(ct + gap), device, uid, MouseEvent("press", button, round(cx, 1), round(cy, 1))))
            out.append(RawEvent(int(ct + gap + dur2), device, uid, MouseEvent("release", button, round(cx, 1), round(cy, 1))))

    out.extend(_app_samples(profile, device, minute_start, rng))
    return out


def _mobile_minute(
    profile: UserProfile, device: str, minute_start: int, rng: np.random.Generator
) -> list[RawEvent]:
    uid = profile.user_id
    out = _app_samples(profile, device, minute_start, rng)
    period = int(1000 / SENSOR_HZ)
    n = MINUTE_MS // period
    for sensor in sorted(profile.sensors):
        sp = profile.sensors[sensor]
        xs = rng.normal(sp.mean[0], sp.stddev[0], n)
        ys = rng.normal(sp.mean[1], sp.stddev[1], n)
        zs = rng.normal(sp.mean[2], sp.stddev[2], n)
        for k in range(n):
            out.append(
                RawEvent(
                    minute_start + k * period,
                    device,
                    uid,
                    SensorSample(sensor, round(float(xs[k]), 4), round(float(ys[k]), 4), round(float(zs[k]), 4)),
                )
            )
    return out


def _app_samples(
    profile: UserProfile, device: str, minute_start: int, rng: np.random.Generator
) -> list[RawEvent]:
    dist = profile.apps.get(device)
    if not dist:
        return []
    ids = sorted(dist)
    weights = np.array([dist[a] for a in ids])
    weights = weights / weights.sum()
    current = int(rng.choice(ids, p=weights))
    out = []
    for k in range(MINUTE_MS // APP_SAMPLE_PERIOD_MS):
        if k > 0 and rng.random() < APP_SWITCH_PROB:
            current = int(rng.choice(ids, p=weights))
        out.append(
            RawEvent(
                minute_start + k * APP_SAMPLE_PERIOD_MS,
                device,
                profile.user_id,
                AppSample(
                    foreground_app_id=current,
                    cpu_pct=float(np.clip(rng.normal(0.3, 0.1), 0, 1)),
                    ram_pct=float(np.clip(rng.normal(0.5, 0.05), 0, 1)),
                    net_tx_bytes=int(rng.integers(0, 20_000)),
                    net_rx_bytes=int(rng.integers(0, 50_000)),
                ),
            )
        )
    return out
