"""Thin HTTP client that replays an event log against the scoring service.

Events are grouped per minute; each active (user, device, minute) becomes an
ingest envelope built with the schemas the server advertises, and each
active (user, minute) is scored once. Timing between minutes honours the
speed multiplier.
"""

from __future__ import annotations

import math
import time
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from typing import Callable, Iterable

import httpx

from ..errors import ValidationError
from ..events.log_io import iter_event_log
from ..events.types import RawEvent
from ..features.extract import extract_minute_vector
from ..features.mobile import DayContext
from ..features.windows import MinuteWindow, infer_device_kinds
from ..pipeline.preprocess import project_features


@dataclass
class ReplaySummary:
    envelopes_sent: int = 0
    ingest_errors: int = 0
    decisions: int = 0
    score_errors: int = 0
    actions: Counter = field(default_factory=Counter)
    latencies_s: list[float] = field(default_factory=list)

    @property
    def errors(self) -> int:
        return self.ingest_errors + self.score_errors

    @property
    def median_latency_s(self) -> float:
        if not self.latencies_s:
            return 0.0
        ordered = sorted(self.latencies_s)
        mid = len(ordered) // 2
        if len(ordered) % 2:
            return ordered[mid]
        return (ordered[mid - 1] + ordered[mid]) / 2.0


def _minute_groups(events: Iterable[RawEvent]):
    current_minute = None
    bucket: list[RawEvent] = []
    for ev in events:
        minute = ev.timestamp // 60_000
        if current_minute is None:
            current_minute = minute
        if minute != current_minute:
            yield current_minute, bucket
            current_minute, bucket = minute, []
        bucket.append(ev)
    if bucket:
        yield current_minute, bucket


def replay_to_service(
    event_log: str,
    endpoint: str,
    speed: float = math.inf,
    token: str = "",
    transport: httpx.BaseTransport | None = None,
    sleep: Callable[[float], None] = time.sleep,
    clock: Callable[[], float] = time.perf_counter,
) -> ReplaySummary:
    if not speed > 0:
        raise ValidationError("must be > 0", field="speed")
    events = list(iter_event_log(event_log))
    summary = ReplaySummary()
    if not events:
        return summary
    kinds = infer_device_kinds(events)

    with httpx.Client(base_url=endpoint, transport=transport, timeout=30.0) as client:
        schemas = client.get("/v1/schemas").json()["schemas"]
        by_kind: dict[str, dict] = {}
        for schema in schemas:
            by_kind.setdefault(schema["device_kind"], schema)
        headers = {"X-API-Token": token}
        contexts: dict[tuple[str, str], DayContext] = {}
        prev_minute = None

        for minute, bucket in _minute_groups(events):
            if prev_minute is not None and math.isfinite(speed):
                gap_s = (minute - prev_minute) * 60.0 / speed
                if gap_s > 0:
                    sleep(gap_s)
            prev_minute = minute

            started = clock()
            per_device: dict[tuple[str, str], list[RawEvent]] = defaultdict(list)
            for ev in bucket:
                per_device[(ev.user_id, ev.device_id)].append(ev)

            users = set()
            for (user, device), devents in sorted(per_device.items()):
                kind = kinds[device]
                schema = by_kind.get(kind)
                if schema is None:
                    summary.ingest_errors += 1
                    continue
                ctx = None
                if kind == "mobile":
                    ctx = contexts.setdefault((user, device), DayContext(user, device))
                window = MinuteWindow(user, device, kind, minute, devents)
                vec = extract_minute_vector(window, ctx)
                values = project_features(
                    vec.features, schema["feature_names"], schema.get("categorical_categories")
                )
                response = client.post(
                    "/v1/vectors",
                    json={
                        "user_id": user,
                        "device_id": device,
                        "device_kind": kind,
                        "minute_index": minute,
                        "schema_id": schema["schema_id"],
                        "features": values,
                    },
                    headers=headers,
                )
                if response.status_code >= 400:
                    summary.ingest_errors += 1
                else:
                    summary.envelopes_sent += 1
                    users.add(user)

            for user in sorted(users):
                response = client.get(f"/v1/scores/{user}/{minute}")
                if response.status_code >= 400:
                    summary.score_errors += 1
                    continue
                body = response.json()
                summary.decisions += 1
                summary.actions[body["decision"]["action"]] += 1
                summary.latencies_s.append(clock() - started)
    return summary
