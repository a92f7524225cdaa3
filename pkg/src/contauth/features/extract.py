"""Assembly of per-minute feature vectors from windows and raw streams."""

from __future__ import annotations

from typing import Iterable, Mapping

from ..errors import ValidationError
from ..events.types import RawEvent
from .keyboard import extract_keyboard_features
from .mobile import DayContext, extract_mobile_app_features, extract_sensor_features
from .mouse import extract_mouse_features
from .apps import extract_app_resource_features
from .schema import MOBILE_SCHEMA_ID, PC_SCHEMA_ID, MinuteFeatureVector
from .windows import MinuteWindow, windowize


def extract_minute_vector(
    window: MinuteWindow, day_context: DayContext | None = None
) -> MinuteFeatureVector:
    """Full feature vector for one window; mobile windows need a day context."""
    if window.device_kind == "pc":
        features = extract_keyboard_features(window)
        features.update(extract_mouse_features(window))
        features.update(extract_app_resource_features(window))
        return MinuteFeatureVector(window.user_id, "pc", window.minute_index, features, PC_SCHEMA_ID)
    if window.device_kind == "mobile":
        if day_context is None:
            raise ValidationError("mobile windows need a day context", field="day_context")
        features = extract_mobile_app_features(window, day_context)
        features.update(extract_sensor_features(window))
        return MinuteFeatureVector(window.user_id, "mobile", window.minute_index, features, MOBILE_SCHEMA_ID)
    raise ValidationError(f"unknown device kind {window.device_kind!r}", field="device_kind")


def extract_stream(
    events: Iterable[RawEvent],
    window_s: float = 60.0,
    device_kinds: Mapping[str, str] | None = None,
) -> list[MinuteFeatureVector]:
    """Windowize a stream and extract one vector per non-empty window.

    Windows of the same device are processed in time order so day contexts
    accumulate correctly.
    """
    windows = windowize(events, window_s=window_s, device_kinds=device_kinds)
    contexts: dict[tuple[str, str], DayContext] = {}
    vectors = []
    for win in windows:
        ctx = None
        if win.device_kind == "mobile":
            key = (win.user_id, win.device_id)
            ctx = contexts.get(key)
            if ctx is None:
                ctx = contexts[key] = DayContext(win.user_id, win.device_id)
        vectors.append(extract_minute_vector(win, ctx))
    return vectors
