import httpx
import pytest

from contauth.errors import ValidationError
from contauth.service import DecisionRecord, DeviceInfo, DeviceNotifier


def decision():
    return DecisionRecord(
        user_id="u1", minute_index=5, aggregate=0.97, action="allow",
        rule_id="allow-high", tier="standard", config_version=1, model_scores={"m": 0.97},
    )


def device():
    return DeviceInfo("dev1", "u1", "http://device.local/actions", "standard")


def flaky_transport(fail_times: int, seen: list):
    calls = {"n": 0}

    def handler(request: httpx.Request) -> httpx.Response:
        calls["n"] += 1
        seen.append(request)
        if calls["n"] <= fail_times:
            return httpx.Response(503)
        return httpx.Response(200, json={"ok": True})

    return httpx.MockTransport(handler)


def test_happy_path_single_attempt():
    seen = []
    notifier = DeviceNotifier(transport=flaky_transport(0, seen), sleep=lambda s: None)
    record = notifier.notify(device(), decision())
    assert record.status == "delivered"
    assert record.attempts == 1
    assert len(seen) == 1
    import json

    body = json.loads(seen[0].content)
    assert body["action"] == "allow"
    assert body["rule_id"] == "allow-high"
    assert body["score"] == pytest.approx(0.97)


def test_two_failures_then_success_logs_three_attempts():
    sleeps = []
    notifier = DeviceNotifier(transport=flaky_transport(2, []), sleep=sleeps.append)
    record = notifier.notify(device(), decision())
    assert record.status == "delivered"
    assert record.attempts == 3
    assert sleeps == pytest.approx([0.1, 0.2])  # exponential backoff


def test_exhausted_retries_dead_letter():
    notifier = DeviceNotifier(transport=flaky_transport(10, []), sleep=lambda s: None)
    record = notifier.notify(device(), decision())
    assert record.status == "dead_letter"
    assert record.attempts == 3
    assert notifier.dead_letters == [record]


def test_connection_errors_also_retry():
    def handler(request):
        raise httpx.ConnectError("refused")

    notifier = DeviceNotifier(transport=httpx.MockTransport(handler), sleep=lambda s: None)
    record = notifier.notify(device(), decision())
    assert record.status == "dead_letter"
    assert record.attempts == 3


def test_unregistered_device_rejected():
    notifier = DeviceNotifier(transport=flaky_transport(0, []))
    with pytest.raises(ValidationError, match="device"):
        notifier.notify(None, decision())
