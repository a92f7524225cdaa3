"""Raw event model shared by the generator, the feature extractors and the service.

An event stream is a time-ordered sequence of observations from one or more
devices. Four payload kinds cover everything the per-minute features need:
keyboard, mouse, application/resource samples and inertial sensor samples.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

# Bounded vocabularies keep one-hot and digraph spaces deterministic.
KEY_ALPHABET_SIZE = 128
APP_VOCABULARY_SIZE = 512

ERASE_KEY_CODES = frozenset({8, 127})  # backspace, delete
WORD_SEPARATOR_CODES = frozenset({9, 10, 13, 32})  # tab, LF, CR, space

PC = "pc"
MOBILE = "mobile"
DEVICE_KINDS = (PC, MOBILE)


@dataclass(frozen=True)
class KeyEvent:
    key_code: int
    action: str  # "press" | "release"

    KIND = "key"


@dataclass(frozen=True)
class MouseEvent:
    kind: str  # "move" | "press" | "release"
    button: str  # "left" | "right" | "middle" | "none"
    x: float
    y: float

    KIND = "mouse"


@dataclass(frozen=True)
class AppSample:
    foreground_app_id: int
    cpu_pct: float
    ram_pct: float
    net_tx_bytes: int
    net_rx_bytes: int

    KIND = "app"


@dataclass(frozen=True)
class SensorSample:
    sensor: str  # "accelerometer" | "gyroscope"
    x: float
    y: float
    z: float

    KIND = "sensor"


Payload = Union[KeyEvent, MouseEvent, AppSample, SensorSample]

PAYLOAD_KINDS = {
    KeyEvent.KIND: KeyEvent,
    MouseEvent.KIND: MouseEvent,
    AppSample.KIND: AppSample,
    SensorSample.KIND: SensorSample,
}


@dataclass(frozen=True)
class RawEvent:
    """One timestamped observation from one device of one user."""

    timestamp: int  # milliseconds since epoch
    device_id: str
    user_id: str
    payload: Payload

    @property
    def minute_index(self) -> int:
        return self.timestamp // 60_000

    @property
    def payload_kind(self) -> str:
        return type(self.payload).KIND


def first_inversion(events) -> int | None:
    """Index of the first out-of-order event per device stream, or None if sorted."""
    last_ts: dict[str, int] = {}
    for i, ev in enumerate(events):
        prev = last_ts.get(ev.device_id)
        if prev is not None and ev.timestamp < prev:
            return i
        last_ts[ev.device_id] = ev.timestamp
    return None
