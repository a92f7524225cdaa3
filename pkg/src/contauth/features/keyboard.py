"""Keyboard feature extraction for PC minute windows.

Hold time is press-to-release of the same key (FIFO matched per key code);
the consecutive-keystroke interval and digraph times are press-to-press.
Words are maximal runs of non-separator, non-erasing key presses.
"""

from __future__ import annotations

from collections import defaultdict, deque

from ..errors import ValidationError
from ..events.types import ERASE_KEY_CODES, KEY_ALPHABET_SIZE, KeyEvent, WORD_SEPARATOR_CODES
from .schema import digraph_count_name, digraph_time_name, keyboard_feature_names
from .stats import mean0, std0
from .windows import MinuteWindow

_ZERO = {name: 0.0 for name in keyboard_feature_names()}


def extract_keyboard_features(window: MinuteWindow) -> dict[str, float]:
    if window.device_kind != "pc":
        raise ValidationError("keyboard features need a pc window", field="device_kind")

    presses: list[tuple[int, int]] = []  # (timestamp, key_code)
    holds: list[float] = []
    pending: dict[int, deque[int]] = defaultdict(deque)
    for ev in window.events:
        p = ev.payload
        if not isinstance(p, KeyEvent):
            continue
        if not 0 <= p.key_code < KEY_ALPHABET_SIZE:
            continue
        if p.action == "press":
            presses.append((ev.timestamp, p.key_code))
            pending[p.key_code].append(ev.timestamp)
        elif p.action == "release" and pending[p.key_code]:
            holds.append(float(ev.timestamp - pending[p.key_code].popleft()))

    out = dict(_ZERO)
    if not presses:
        return out

    out["kb_keystrokes"] = float(len(presses))
    for _, code in presses:
        out[f"kb_key_{code}"] += 1.0
    n_erase = sum(1 for _, c in presses if c in ERASE_KEY_CODES)
    out["kb_erase_pct"] = n_erase / len(presses)

    out["kb_hold_mean"] = mean0(holds)
    out["kb_hold_std"] = std0(holds)

    intervals = [float(presses[i + 1][0] - presses[i][0]) for i in range(len(presses) - 1)]
    out["kb_interval_mean"] = mean0(intervals)
    out["kb_interval_std"] = std0(intervals)

    # words: runs of ordinary keys broken by separators; erasing keys are neutral
    word_lengths: list[int] = []
    run = 0
    for _, code in presses:
        if code in WORD_SEPARATOR_CODES:
            if run > 0:
                word_lengths.append(run)
            run = 0
        elif code not in ERASE_KEY_CODES:
            run += 1
    if run > 0:
        word_lengths.append(run)
    out["kb_words"] = float(len(word_lengths))
    for length in word_lengths:
        if length > 20:
            out["kb_wordlen_20p"] += 1.0
        else:
            out[f"kb_wordlen_{length}"] += 1.0

    # sparse digraphs over consecutive presses
    counts: dict[tuple[int, int], int] = defaultdict(int)
    times: dict[tuple[int, int], float] = defaultdict(float)
    for i in range(len(presses) - 1):
        pair = (presses[i][1], presses[i + 1][1])
        counts[pair] += 1
        times[pair] += presses[i + 1][0] - presses[i][0]
    for pair in sorted(counts):
        out[digraph_count_name(*pair)] = float(counts[pair])
        out[digraph_time_name(*pair)] = times[pair] / counts[pair]
    return out
