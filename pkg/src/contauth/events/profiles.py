"""User behaviour profiles driving the synthetic event generator.

A profile is the statistical signature of one user across their devices:
typing cadence, mouse habits, app preferences, sensor characteristics and an
hourly activity schedule per device.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from ..errors import ValidationError
from .types import APP_VOCABULARY_SIZE, DEVICE_KINDS, KEY_ALPHABET_SIZE

_DIST_TOL = 1e-9


@dataclass
class TypingProfile:
    mean_hold_ms: float
    mean_flight_ms: float
    jitter_ms: float
    erase_rate: float
    vocabulary: dict[int, float]  # key code -> weight, sums to 1


@dataclass
class MouseProfile:
    mean_speed_px_s: float
    click_rate_per_min: float
    direction_bias: list[float]  # 8 sector weights


@dataclass
class SensorProfile:
    mean: tuple[float, float, float]
    stddev: tuple[float, float, float]


@dataclass
class UserProfile:
    user_id: str
    devices: dict[str, str]  # device_id -> "pc" | "mobile"
    typing: TypingProfile
    mouse: MouseProfile
    apps: dict[str, dict[int, float]]  # device_id -> app id distribution
    sensors: dict[str, SensorProfile]  # "accelerometer" / "gyroscope"
    schedule: dict[str, list[float]] = field(default_factory=dict)  # device_id -> 24 probs

    def validate(self) -> None:
        """Raise ValidationError naming the first offending field."""
        if not self.user_id:
            raise ValidationError("user_id must be non-empty", field="user_id")
        if not self.devices:
            raise ValidationError("at least one device required", field="devices")
        for dev, kind in self.devices.items():
            if kind not in DEVICE_KINDS:
                raise ValidationError(f"unknown device kind {kind!r} for {dev}", field="devices")

        t = self.typing
        for name in ("mean_hold_ms", "mean_flight_ms", "jitter_ms"):
            if getattr(t, name) < 0:
                raise ValidationError("must be >= 0", field=f"typing.{name}")
        if not 0.0 <= t.erase_rate <= 1.0:
            raise ValidationError("must be in [0,1]", field="typing.erase_rate")
        _check_distribution(t.vocabulary, "typing.vocabulary", KEY_ALPHABET_SIZE)

        m = self.mouse
        if m.mean_speed_px_s < 0:
            raise ValidationError("must be >= 0", field="mouse.mean_speed_px_s")
        if m.click_rate_per_min < 0:
            raise ValidationError("must be >= 0", field="mouse.click_rate_per_min")
        if len(m.direction_bias) != 8 or any(w < 0 for w in m.direction_bias):
            raise ValidationError("needs 8 non-negative weights", field="mouse.direction_bias")
        if sum(m.direction_bias) <= 0:
            raise ValidationError("weights must not all be zero", field="mouse.direction_bias")

        for dev in self.devices:
            if dev in self.apps:
                _check_distribution(self.apps[dev], f"apps.{dev}", APP_VOCABULARY_SIZE)
        for sensor, prof in self.sensors.items():
            if any(s < 0 for s in prof.stddev):
                raise ValidationError("stddev must be >= 0", field=f"sensors.{sensor}.stddev")

        for dev, probs in self.schedule.items():
            if dev not in self.devices:
                raise ValidationError(f"unknown device {dev}", field="schedule")
            if len(probs) != 24:
                raise ValidationError("needs 24 hourly probabilities", field=f"schedule.{dev}")
            if any(not 0.0 <= p <= 1.0 for p in probs):
                raise ValidationError("probabilities must be in [0,1]", field=f"schedule.{dev}")

    def to_dict(self) -> dict:
        return {
            "user_id": self.user_id,
            "devices": dict(self.devices),
            "typing": {
                "mean_hold_ms": self.typing.mean_hold_ms,
                "mean_flight_ms": self.typing.mean_flight_ms,
                "jitter_ms": self.typing.jitter_ms,
                "erase_rate": self.typing.erase_rate,
                "vocabulary": {str(k): v for k, v in self.typing.vocabulary.items()},
            },
            "mouse": {
                "mean_speed_px_s": self.mouse.mean_speed_px_s,
                "click_rate_per_min": self.mouse.click_rate_per_min,
                "direction_bias": list(self.mouse.direction_bias),
            },
            "apps": {dev: {str(a): w for a, w in dist.items()} for dev, dist in self.apps.items()},
            "sensors": {
                name: {"mean": list(p.mean), "stddev": list(p.stddev)}
                for name, p in self.sensors.items()
            },
            "schedule": {dev: list(probs) for dev, probs in self.schedule.items()},
        }

    @classmethod
    def from_dict(cls, d: dict) -> "UserProfile":
        return cls(
            user_id=d["user_id"],
            devices=dict(d["devices"]),
            typing=TypingProfile(
                mean_hold_ms=d["typing"]["mean_hold_ms"],
                mean_flight_ms=d["typing"]["mean_flight_ms"],
                jitter_ms=d["typing"]["jitter_ms"],
                erase_rate=d["typing"]["erase_rate"],
                vocabulary={int(k): v for k, v in d["typing"]["vocabulary"].items()},
            ),
            mouse=MouseProfile(
                mean_speed_px_s=d["mouse"]["mean_speed_px_s"],
                click_rate_per_min=d["mouse"]["click_rate_per_min"],
                direction_bias=list(d["mouse"]["direction_bias"]),
            ),
            apps={dev: {int(a): w for a, w in dist.items()} for dev, dist in d["apps"].items()},
            sensors={
                name: SensorProfile(mean=tuple(p["mean"]), stddev=tuple(p["stddev"]))
                for name, p in d["sensors"].items()
            },
            schedule={dev: list(probs) for dev, probs in d.get("schedule", {}).items()},
        )


def _check_distribution(dist: dict[int, float], field_name: str, vocab_size: int) -> None:
    if not dist:
        raise ValidationError("distribution must not be empty", field=field_name)
    total = 0.0
    for code, w in dist.items():
        if w < 0:
            raise ValidationError(f"negative weight for {code}", field=field_name)
        if not 0 <= code < vocab_size:
            raise ValidationError(f"code {code} outside vocabulary", field=field_name)
        total += w
    if abs(total - 1.0) > _DIST_TOL:
        raise ValidationError(f"weights sum to {total!r}, expected 1", field=field_name)


def load_profiles(path: str | Path) -> list[UserProfile]:
    """Load a JSON list of profiles and validate each."""
    data = json.loads(Path(path).read_text())
    profiles = [UserProfile.from_dict(d) for d in data]
    for p in profiles:
        p.validate()
    return profiles


def save_profiles(profiles: list[UserProfile], path: str | Path) -> None:
    Path(path).write_text(json.dumps([p.to_dict() for p in profiles], indent=2))


def _uniform(codes: list[int]) -> dict[int, float]:
    w = 1.0 / len(codes)
    return {c: w for c in codes}


def _typing_vocab(letters: list[int]) -> dict[int, float]:
    # letters share 80% of the mass, space gets 20% so words terminate
    vocab = {c: 0.8 / len(letters) for c in letters}
    vocab[32] = 0.2
    return vocab


def _schedule(active_hours: list[int], prob: float) -> list[float]:
    return [prob if h in active_hours else 0.0 for h in range(24)]


def demo_profiles(n_users: int = 5) -> list[UserProfile]:
    """A deliberately confusable 5-user set.

    Users 1 and 2 share their PC behaviour (but differ on mobile); users 3
    and 4 share their mobile behaviour (but differ on PC). Each user's two
    devices are active in the same hours, so most minutes carry both feature
    blocks and only the fused multi-device view separates everyone.
    """
    if not 2 <= n_users <= 5:
        raise ValidationError("demo set supports 2..5 users", field="n_users")

    # (hold, flight, jitter, erase, letter block)
    typing_params = [
        (85.0, 240.0, 22.0, 0.05, list(range(97, 107))),
        (85.0, 240.0, 22.0, 0.05, list(range(97, 107))),   # same as user 1
        (120.0, 330.0, 30.0, 0.10, list(range(100, 110))),
        (65.0, 180.0, 15.0, 0.02, list(range(104, 114))),
        (100.0, 280.0, 25.0, 0.08, list(range(108, 118))),
    ]
    # (speed, clicks/min, favoured sector)
    mouse_params = [
        (420.0, 14.0, 0),
        (420.0, 14.0, 0),   # same as user 1
        (260.0, 7.0, 2),
        (610.0, 22.0, 4),
        (340.0, 10.0, 6),
    ]
    pc_apps = [
        [10, 11, 12],
        [10, 11, 12],       # same as user 1
        [20, 21, 22],
        [30, 31, 32],
        [40, 41, 42],
    ]
    mobile_apps = [
        [110, 111, 112],
        [120, 121, 122],
        [130, 131, 132],
        [130, 131, 132],    # same as user 3
        [150, 151, 152],
    ]
    accel_means = [(0.5, 1.0, 9.6), (2.0, 0.3, 9.3), (1.2, 2.2, 9.0), (1.2, 2.2, 9.0), (0.1, 0.4, 9.8)]
    gyro_means = [(0.02, 0.05, 0.01), (0.15, 0.02, 0.08), (0.06, 0.11, 0.04), (0.06, 0.11, 0.04), (0.01, 0.01, 0.2)]
    # both devices share the user's active hours; probabilities differ a bit
    # so single-device minutes still occur
    active_hours = [[9, 10], [9, 10], [11, 12], [11, 12], [14, 15]]
    pc_prob = [0.72, 0.66, 0.70, 0.64, 0.70]
    mobile_prob = [0.75, 0.70, 0.74, 0.70, 0.72]

    profiles = []
    for i in range(n_users):
        uid = f"user{i + 1}"
        hold, flight, jitter, erase, letters = typing_params[i]
        speed, clicks, sector = mouse_params[i]
        bias = [0.05] * 8
        bias[sector] = 0.65
        total = sum(bias)
        bias = [b / total for b in bias]
        pc_dev, mob_dev = f"{uid}-pc", f"{uid}-mob"
        profiles.append(
            UserProfile(
                user_id=uid,
                devices={pc_dev: "pc", mob_dev: "mobile"},
                typing=TypingProfile(hold, flight, jitter, erase, _typing_vocab(letters)),
                mouse=MouseProfile(speed, clicks, bias),
                apps={pc_dev: _uniform(pc_apps[i]), mob_dev: _uniform(mobile_apps[i])},
                sensors={
                    "accelerometer": SensorProfile(accel_means[i], (0.4, 0.4, 0.5)),
                    "gyroscope": SensorProfile(gyro_means[i], (0.02, 0.02, 0.03)),
                },
                schedule={
                    pc_dev: _schedule(active_hours[i], pc_prob[i]),
                    mob_dev: _schedule(active_hours[i], mobile_prob[i]),
                },
            )
        )
    return profiles
