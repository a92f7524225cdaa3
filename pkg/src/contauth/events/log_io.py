"""Event log files: one event per line, comma separated.

Columns: timestamp, user_id, device_id, payload_kind, then the payload
fields in their declared order, padded with empty cells to a fixed width.
A header line is required.
"""

from __future__ import annotations

import csv
from pathlib import Path
from typing import Iterable, Iterator, TextIO

from ..errors import ValidationError
from .types import AppSample, KeyEvent, MouseEvent, RawEvent, SensorSample

HEADER = ["timestamp", "user_id", "device_id", "payload_kind", "p1", "p2", "p3", "p4", "p5"]
_N_PAYLOAD_COLS = 5


def _payload_cells(ev: RawEvent) -> list[str]:
    p = ev.payload
    if isinstance(p, KeyEvent):
        cells = [str(p.key_code), p.action]
    elif isinstance(p, MouseEvent):
        cells = [p.kind, p.button, repr(p.x), repr(p.y)]
    elif isinstance(p, AppSample):
        cells = [str(p.foreground_app_id), repr(p.cpu_pct), repr(p.ram_pct),
                 str(p.net_tx_bytes), str(p.net_rx_bytes)]
    elif isinstance(p, SensorSample):
        cells = [p.sensor, repr(p.x), repr(p.y), repr(p.z)]
    else:
        raise ValidationError(f"unknown payload type {type(p).__name__}", field="payload")
    return cells + [""] * (_N_PAYLOAD_COLS - len(cells))


def write_event_log(events: Iterable[RawEvent], path: str | Path) -> int:
    """Write events to a log file; returns the number of events written."""
    n = 0
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(HEADER)
        for ev in events:
            w.writerow([ev.timestamp, ev.user_id, ev.device_id, ev.payload_kind] + _payload_cells(ev))
            n += 1
    return n


def _parse_row(row: list[str], line_no: int) -> RawEvent:
    try:
        ts = int(row[0])
        user_id, device_id, kind = row[1], row[2], row[3]
        p = row[4:]
        if kind == "key":
            payload = KeyEvent(int(p[0]), p[1])
        elif kind == "mouse":
            payload = MouseEvent(p[0], p[1], float(p[2]), float(p[3]))
        elif kind == "app":
            payload = AppSample(int(p[0]), float(p[1]), float(p[2]), int(p[3]), int(p[4]))
        elif kind == "sensor":
            payload = SensorSample(p[0], float(p[1]), float(p[2]), float(p[3]))
        else:
            raise ValueError(f"unknown payload kind {kind!r}")
    except (ValueError, IndexError) as exc:
        raise ValidationError(f"line {line_no}: {exc}", field="event_log") from exc
    return RawEvent(ts, device_id, user_id, payload)


def iter_event_log(source: str | Path | TextIO) -> Iterator[RawEvent]:
    """Parse an event log lazily. Raises ValidationError with the line number on bad rows."""
    if isinstance(source, (str, Path)):
        with open(source, newline="") as fh:
            yield from iter_event_log(fh)
        return
    reader = csv.reader(source)
    header = next(reader, None)
    if header is None or [c.strip() for c in header[:4]] != HEADER[:4]:
        raise ValidationError("missing or invalid header line", field="event_log")
    for line_no, row in enumerate(reader, start=2):
        if not row:
            continue
        yield _parse_row(row, line_no)


def read_event_log(path: str | Path) -> list[RawEvent]:
    return list(iter_event_log(path))
