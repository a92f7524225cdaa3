"""Action delivery to device callback endpoints.

At-least-once semantics: up to three attempts with exponential backoff;
exhausted deliveries land in a dead-letter list. Device actions are
idempotent so duplicates are harmless.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Callable

import httpx

from ..errors import ValidationError
from .state import DecisionRecord, DeviceInfo

MAX_ATTEMPTS = 3
BACKOFF_BASE_S = 0.1


@dataclass
class DeliveryRecord:
    device_id: str
    url: str
    status: str  # "delivered" | "dead_letter"
    attempts: int
    action: str
    rule_id: str


@dataclass
class DeviceNotifier:
    transport: httpx.BaseTransport | None = None
    sleep: Callable[[float], None] = time.sleep
    timeout: float = 5.0
    deliveries: list[DeliveryRecord] = field(default_factory=list)
    dead_letters: list[DeliveryRecord] = field(default_factory=list)

    def notify(self, device: DeviceInfo | None, decision: DecisionRecord) -> DeliveryRecord:
        if device is None:
            raise ValidationError("device not registered", field="device_id")
        payload = {
            "action": decision.action,
            "score": decision.aggregate,
            "rule_id": decision.rule_id,
            "user_id": decision.user_id,
            "minute_index": decision.minute_index,
            "config_version": decision.config_version,
        }
        attempts = 0
        with httpx.Client(transport=self.transport, timeout=self.timeout) as client:
            while attempts < MAX_ATTEMPTS:
                attempts += 1
                try:
                    response = client.post(device.callback_url, json=payload)
                    if response.status_code < 400:
                        record = DeliveryRecord(
                            device.device_id, device.callback_url, "delivered",
                            attempts, decision.action, decision.rule_id,
                        )
                        self.deliveries.append(record)
                        return record
                except httpx.HTTPError:
                    pass
                if attempts < MAX_ATTEMPTS:
                    self.sleep(BACKOFF_BASE_S * (2 ** (attempts - 1)))
        record = DeliveryRecord(
            device.device_id, device.callback_url, "dead_letter",
            attempts, decision.action, decision.rule_id,
        )
        self.deliveries.append(record)
        self.dead_letters.append(record)
        return record
