from .types import (
    APP_VOCABULARY_SIZE,
    ERASE_KEY_CODES,
    KEY_ALPHABET_SIZE,
    WORD_SEPARATOR_CODES,
    AppSample,
    KeyEvent,
    MouseEvent,
    RawEvent,
    SensorSample,
    first_inversion,
)
from .profiles import MouseProfile, SensorProfile, TypingProfile, UserProfile, demo_profiles, load_profiles, save_profiles
from .generate import generate_stream, iter_stream
from .replay import replay
from .log_io import iter_event_log, read_event_log, write_event_log

__all__ = [
    "APP_VOCABULARY_SIZE",
    "ERASE_KEY_CODES",
    "KEY_ALPHABET_SIZE",
    "WORD_SEPARATOR_CODES",
    "AppSample",
    "KeyEvent",
    "MouseEvent",
    "RawEvent",
    "SensorSample",
    "first_inversion",
    "MouseProfile",
    "SensorProfile",
    "TypingProfile",
    "UserProfile",
    "demo_profiles",
    "load_profiles",
    "save_profiles",
    "generate_stream",
    "iter_stream",
    "replay",
    "iter_event_log",
    "read_event_log",
    "write_event_log",
]
