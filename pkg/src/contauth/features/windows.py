"""Time-window grouping of raw event streams."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping

from ..errors import ValidationError
from ..events.types import KeyEvent, MouseEvent, RawEvent, SensorSample


@dataclass
class MinuteWindow:
    """All events of one (user, device) falling in one window of the timeline."""

    user_id: str
    device_id: str
    device_kind: str  # "pc" | "mobile"
    minute_index: int
    events: list[RawEvent] = field(default_factory=list)


def infer_device_kinds(events: Iterable[RawEvent]) -> dict[str, str]:
    """Classify devices by the payload kinds seen anywhere in their stream."""
    kinds: dict[str, str] = {}
    undecided: set[str] = set()
    for ev in events:
        if ev.device_id in kinds:
            continue
        if isinstance(ev.payload, (KeyEvent, MouseEvent)):
            kinds[ev.device_id] = "pc"
            undecided.discard(ev.device_id)
        elif isinstance(ev.payload, SensorSample):
            kinds[ev.device_id] = "mobile"
            undecided.discard(ev.device_id)
        else:
            undecided.add(ev.device_id)
    for dev in undecided:
        raise ValidationError(
            f"cannot infer kind of device {dev!r} (app samples only); pass device_kinds",
            field="device_kinds",
        )
    return kinds


def windowize(
    events: Iterable[RawEvent],
    window_s: float = 60.0,
    device_kinds: Mapping[str, str] | None = None,
) -> list[MinuteWindow]:
    """Partition events into per-(user, device) windows of `window_s` seconds.

    Windows are half-open: an event at exactly the boundary starts the next
    window. Empty windows are omitted. The window index equals minutes since
    epoch for the default 60 s width. Events must be sorted per device.
    """
    if window_s <= 0:
        raise ValidationError("must be > 0", field="window_s")
    events = list(events)
    width_ms = int(window_s * 1000)

    kinds = dict(device_kinds) if device_kinds is not None else infer_device_kinds(events)

    windows: dict[tuple[str, str, int], MinuteWindow] = {}
    last_ts: dict[str, int] = {}
    for i, ev in enumerate(events):
        prev = last_ts.get(ev.device_id)
        if prev is not None and ev.timestamp < prev:
            raise ValidationError(
                f"device {ev.device_id!r} stream not sorted at index {i}", field="events"
            )
        last_ts[ev.device_id] = ev.timestamp
        idx = ev.timestamp // width_ms
        key = (ev.user_id, ev.device_id, idx)
        win = windows.get(key)
        if win is None:
            kind = kinds.get(ev.device_id)
            if kind is None:
                raise ValidationError(f"no kind for device {ev.device_id!r}", field="device_kinds")
            win = MinuteWindow(ev.user_id, ev.device_id, kind, idx)
            windows[key] = win
        win.events.append(ev)
    return [windows[k] for k in sorted(windows)]
