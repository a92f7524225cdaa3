"""Timed replay of a recorded event stream.

Re-emits events preserving relative timing scaled by a speed multiplier.
`speed=math.inf` emits everything immediately. The sleep function is
injectable so tests can run without waiting.
"""

from __future__ import annotations

import math
import time
from typing import Callable, Iterable, Iterator

from ..errors import ValidationError
from .types import RawEvent


def replay(
    events: Iterable[RawEvent],
    speed: float = math.inf,
    sleep: Callable[[float], None] = time.sleep,
) -> Iterator[RawEvent]:
    """Yield events with inter-event gaps of (delta_ms / speed) milliseconds."""
    if not speed > 0:
        raise ValidationError("must be > 0", field="speed")
    events = list(events)
    for i in range(1, len(events)):
        if events[i].timestamp < events[i - 1].timestamp:
            raise ValidationError(
                f"events not sorted; first inversion at index {i}", field="events"
            )

    prev_ts: int | None = None
    for ev in events:
        if prev_ts is not None and math.isfinite(speed):
            gap_s = (ev.timestamp - prev_ts) / 1000.0 / speed
            if gap_s > 0:
                sleep(gap_s)
        prev_ts = ev.timestamp
        yield ev
