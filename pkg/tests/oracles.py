"""Independently coded brute-force oracles.

These deliberately re-derive every value with plain loops and the most
literal reading of each feature definition, sharing no computation code with
the package. Where the package is clever (sparse digraphs, numpy, run-length
scans), the oracle is dumb on purpose.
"""

from __future__ import annotations

import math
from collections import Counter

ERASE = {8, 127}
SEPARATORS = {9, 10, 13, 32}


def _mean(xs):
    return sum(xs) / len(xs) if xs else 0.0


def _pvar(xs):
    if not xs:
        return 0.0
    m = _mean(xs)
    return sum((x - m) ** 2 for x in xs) / len(xs)


def _pstd(xs):
    return math.sqrt(_pvar(xs))


# ---- keyboard ----

def oracle_keyboard(key_events):
    """key_events: list of (timestamp, code, action)."""
    out = {}
    presses = [(t, c) for t, c, a in key_events if a == "press" and 0 <= c < 128]

    out["kb_keystrokes"] = float(len(presses))
    for k in range(128):
        out[f"kb_key_{k}"] = float(sum(1 for _, c in presses if c == k))
    out["kb_erase_pct"] = (
        sum(1 for _, c in presses if c in ERASE) / len(presses) if presses else 0.0
    )

    # FIFO hold matching per key code
    holds = []
    open_presses = {}
    for t, c, a in key_events:
        if not 0 <= c < 128:
            continue
        if a == "press":
            open_presses.setdefault(c, []).append(t)
        elif a == "release" and open_presses.get(c):
            holds.append(float(t - open_presses[c].pop(0)))
    out["kb_hold_mean"] = _mean(holds)
    out["kb_hold_std"] = _pstd(holds)

    intervals = [float(presses[i + 1][0] - presses[i][0]) for i in range(len(presses) - 1)]
    out["kb_interval_mean"] = _mean(intervals)
    out["kb_interval_std"] = _pstd(intervals)

    words = []
    run = 0
    for _, c in presses:
        if c in SEPARATORS:
            if run:
                words.append(run)
            run = 0
        elif c not in ERASE:
            run += 1
    if run:
        words.append(run)
    out["kb_words"] = float(len(words))
    for n in range(1, 21):
        out[f"kb_wordlen_{n}"] = float(sum(1 for w in words if w == n))
    out["kb_wordlen_20p"] = float(sum(1 for w in words if w > 20))

    pairs = [(presses[i][1], presses[i + 1][1]) for i in range(len(presses) - 1)]
    deltas = [presses[i + 1][0] - presses[i][0] for i in range(len(presses) - 1)]
    for pair in set(pairs):
        ts = [float(d) for p, d in zip(pairs, deltas) if p == pair]
        out[f"kb_dg_n_{pair[0]}_{pair[1]}"] = float(len(ts))
        out[f"kb_dg_t_{pair[0]}_{pair[1]}"] = _mean(ts)
    return out


# ---- mouse ----

SECTORS = ("right", "up_right", "up", "up_left", "left", "down_left", "down", "down_right")


def oracle_mouse(mouse_events):
    """mouse_events: list of (timestamp, kind, button, x, y)."""
    out = {}
    moves = [(t, x, y) for t, k, b, x, y in mouse_events if k == "move"]
    out["ms_move_events"] = float(len(moves))

    segs = []
    for i in range(len(moves) - 1):
        t0, x0, y0 = moves[i]
        t1, x1, y1 = moves[i + 1]
        segs.append((math.sqrt((x1 - x0) ** 2 + (y1 - y0) ** 2), (t1 - t0) / 1000.0, x1 - x0, y1 - y0))

    lengths = [s[0] for s in segs]
    durations = [s[1] for s in segs]
    speeds = [s[0] / s[1] for s in segs if s[1] > 0]
    out["ms_segments"] = float(len(segs))
    out["ms_total_dist"] = sum(lengths)
    out["ms_len_mean"] = _mean(lengths)
    out["ms_len_std"] = _pstd(lengths)
    out["ms_len_max"] = max(lengths) if lengths else 0.0
    out["ms_speed_mean"] = _mean(speeds)
    out["ms_speed_std"] = _pstd(speeds)
    out["ms_speed_max"] = max(speeds) if speeds else 0.0
    out["ms_dur_mean"] = _mean(durations)
    out["ms_dur_std"] = _pstd(durations)
    out["ms_moving_time"] = sum(durations)

    edges = [10.0, 50.0, 150.0, 400.0]
    for b in range(5):
        lo = 0.0 if b == 0 else edges[b - 1]
        hi = edges[b] if b < 4 else math.inf
        out[f"ms_len_hist_{b}"] = float(sum(1 for d in lengths if lo <= d < hi))

    for si, name in enumerate(SECTORS):
        sp, dist = [], 0.0
        for d, dt, dx, dy in segs:
            if d == 0:
                continue
            ang = math.degrees(math.atan2(dy, dx)) % 360.0
            sector = min(int(ang // 45.0), 7)
            if sector != si:
                continue
            dist += d
            if dt > 0:
                sp.append(d / dt)
        out[f"ms_speed_{name}"] = _mean(sp)
        out[f"ms_dist_{name}"] = dist

    for button in ("left", "right", "middle"):
        durs = []
        open_presses = []
        for t, k, b, _, _ in mouse_events:
            if b != button:
                continue
            if k == "press":
                open_presses.append(t)
            elif k == "release" and open_presses:
                durs.append(float(t - open_presses.pop(0)))
        out[f"ms_click_n_{button}"] = float(len(durs))
        out[f"ms_click_dur_mean_{button}"] = _mean(durs)
        out[f"ms_click_dur_std_{button}"] = _pstd(durs)

    left_presses = [t for t, k, b, _, _ in mouse_events if k == "press" and b == "left"]
    gaps = [
        float(left_presses[i + 1] - left_presses[i])
        for i in range(len(left_presses) - 1)
        if left_presses[i + 1] - left_presses[i] <= 500.0
    ]
    out["ms_dclick_n"] = float(len(gaps))
    out["ms_dclick_gap_mean"] = _mean(gaps)
    out["ms_dclick_gap_std"] = _pstd(gaps)
    return out


# ---- pc app/resource ----

def oracle_app_resource(app_samples):
    """app_samples: list of (app_id, cpu, ram, tx, rx) in time order."""
    out = {}
    ids = [s[0] for s in app_samples]
    if not ids:
        zero_names = [
            "ar_last_app", "ar_penult_app", "ar_active_apps_mean", "ar_app_changes",
            "ar_cpu_mean", "ar_cpu_std", "ar_ram_mean", "ar_ram_std", "ar_net_tx",
            "ar_net_rx", "ar_samples", "ar_distinct_apps", "ar_most_common_app",
            "ar_most_common_count", "ar_cpu_max", "ar_ram_max", "ar_net_total",
        ]
        return {n: 0.0 for n in zero_names}

    out["ar_last_app"] = float(ids[-1])
    out["ar_penult_app"] = 0.0
    for a in reversed(ids[:-1]):
        if a != ids[-1]:
            out["ar_penult_app"] = float(a)
            break
    running = [len(set(ids[: i + 1])) for i in range(len(ids))]
    out["ar_active_apps_mean"] = _mean([float(r) for r in running])
    out["ar_app_changes"] = float(sum(1 for i in range(1, len(ids)) if ids[i] != ids[i - 1]))
    cpu = [s[1] for s in app_samples]
    ram = [s[2] for s in app_samples]
    out["ar_cpu_mean"], out["ar_cpu_std"], out["ar_cpu_max"] = _mean(cpu), _pstd(cpu), max(cpu)
    out["ar_ram_mean"], out["ar_ram_std"], out["ar_ram_max"] = _mean(ram), _pstd(ram), max(ram)
    out["ar_net_tx"] = float(sum(s[3] for s in app_samples))
    out["ar_net_rx"] = float(sum(s[4] for s in app_samples))
    out["ar_net_total"] = out["ar_net_tx"] + out["ar_net_rx"]
    out["ar_samples"] = float(len(ids))
    out["ar_distinct_apps"] = float(len(set(ids)))
    counts = Counter(ids)
    best_count = max(counts.values())
    best_id = min(a for a, c in counts.items() if c == best_count)
    out["ar_most_common_app"] = float(best_id)
    out["ar_most_common_count"] = float(best_count)
    return out


# ---- mobile apps (whole-day replay) ----

def oracle_mobile_day(minutes):
    """minutes: list of per-minute sample lists [(app_id, tx, rx), ...].

    Replays a day from scratch and returns one 13-feature dict per minute.
    """
    results = []
    day_ids: list[int] = []
    for samples in minutes:
        out = {n: 0.0 for n in (
            "ma_min_distinct", "ma_min_total", "ma_day_distinct", "ma_day_total",
            "ma_min_top_app", "ma_min_top_count", "ma_day_top_app", "ma_day_top_count",
            "ma_cur_app", "ma_prev_app", "ma_pred_app", "ma_net_tx", "ma_net_rx",
        )}
        if samples:
            ids = [s[0] for s in samples]
            day_ids.extend(ids)
            mc = Counter(ids)
            dc = Counter(day_ids)
            out["ma_min_distinct"] = float(len(set(ids)))
            out["ma_min_total"] = float(len(ids))
            out["ma_day_distinct"] = float(len(set(day_ids)))
            out["ma_day_total"] = float(len(day_ids))
            best = max(mc.values())
            out["ma_min_top_app"] = float(min(a for a, c in mc.items() if c == best))
            out["ma_min_top_count"] = float(best)
            best = max(dc.values())
            out["ma_day_top_app"] = float(min(a for a, c in dc.items() if c == best))
            out["ma_day_top_count"] = float(best)

            dedup = [day_ids[0]]
            for a in day_ids[1:]:
                if a != dedup[-1]:
                    dedup.append(a)
            cur = dedup[-1]
            out["ma_cur_app"] = float(cur)
            out["ma_prev_app"] = float(dedup[-2]) if len(dedup) > 1 else 0.0
            preds = Counter(dedup[i - 1] for i in range(1, len(dedup)) if dedup[i] == cur)
            if preds:
                best = max(preds.values())
                out["ma_pred_app"] = float(min(a for a, c in preds.items() if c == best))
            out["ma_net_tx"] = float(sum(s[1] for s in samples))
            out["ma_net_rx"] = float(sum(s[2] for s in samples))
        results.append(out)
    return results


# ---- sensors ----

def oracle_sensors(samples_by_sensor):
    """samples_by_sensor: {"accelerometer"|"gyroscope": [(x, y, z), ...]}."""
    out = {}
    for sensor, prefix in (("accelerometer", "acc"), ("gyroscope", "gyr")):
        samples = samples_by_sensor.get(sensor, [])
        channels = {
            "x": [s[0] for s in samples],
            "y": [s[1] for s in samples],
            "z": [s[2] for s in samples],
            "mag": [math.sqrt(s[0] ** 2 + s[1] ** 2 + s[2] ** 2) for s in samples],
        }
        for ch, values in channels.items():
            base = f"sn_{prefix}_{ch}"
            out[f"{base}_mean"] = _mean(values)
            out[f"{base}_max"] = max(values) if values else 0.0
            out[f"{base}_min"] = min(values) if values else 0.0
            out[f"{base}_var"] = _pvar(values)
            out[f"{base}_ptp"] = (max(values) - min(values)) if values else 0.0
    return out


# ---- derived usage ----

def oracle_usage(states):
    """states: list of per-minute states in {"none","pc","mobile","both"}.

    Returns the 32 usage features for one window (no hour/weekday — the
    caller checks those separately), or None if the window has no activity.
    """
    if all(s == "none" for s in states):
        return None

    out = {}
    pc_active = [s in ("pc", "both") for s in states]
    mob_active = [s in ("mobile", "both") for s in states]
    both_active = [s == "both" for s in states]
    out["pc_count"] = float(sum(pc_active))
    out["mobile_count"] = float(sum(mob_active))
    out["both_minutes"] = float(sum(both_active))
    out["none_minutes"] = float(sum(1 for s in states if s == "none"))

    nonidle = [s for s in states if s != "none"]
    dedup = []
    for s in nonidle:
        if not dedup or s != dedup[-1]:
            dedup.append(s)
    out["pc_to_mobile"] = float(
        sum(1 for i in range(1, len(dedup)) if dedup[i - 1] == "pc" and dedup[i] == "mobile")
    )
    out["mobile_to_pc"] = float(
        sum(1 for i in range(1, len(dedup)) if dedup[i - 1] == "mobile" and dedup[i] == "pc")
    )

    def runs(flags, want):
        lens, cur = [], 0
        for f in flags:
            if f == want:
                cur += 1
            else:
                if cur:
                    lens.append(float(cur))
                cur = 0
        if cur:
            lens.append(float(cur))
        return lens

    for name, flags in (("pc", pc_active), ("mobile", mob_active), ("both", both_active)):
        for label, want in ((f"{name}_active", True), (f"{name}_inactive", False)):
            lens = runs(flags, want)
            out[f"{label}_mean"] = _mean(lens)
            out[f"{label}_std"] = _pstd(lens)
            out[f"{label}_max"] = max(lens) if lens else 0.0
            out[f"{label}_min"] = min(lens) if lens else 0.0
    return out


# ---- selection / metrics ----

def oracle_minimal_prefix(names, weights, threshold):
    """Kept set for cumulative importance selection, by exhaustive prefix scan."""
    order = sorted(zip(names, weights), key=lambda nw: (-nw[1], nw[0]))
    total = sum(weights)
    for k in range(1, len(order) + 1):
        if sum(w for _, w in order[:k]) >= threshold * total - 1e-12:
            return {n for n, _ in order[:k]}
    return {n for n, _ in order}


def oracle_confusion(truth, predicted, classes):
    """Per-class TP/FP/FN/TN plus precision/recall/f1 and macro averages."""
    per_class = {}
    for c in classes:
        tp = sum(1 for t, p in zip(truth, predicted) if t == c and p == c)
        fp = sum(1 for t, p in zip(truth, predicted) if t != c and p == c)
        fn = sum(1 for t, p in zip(truth, predicted) if t == c and p != c)
        tn = len(truth) - tp - fp - fn
        precision = tp / (tp + fp) if tp + fp else 0.0
        recall = tp / (tp + fn) if tp + fn else 0.0
        f1 = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
        per_class[c] = dict(tp=tp, fp=fp, fn=fn, tn=tn, precision=precision, recall=recall, f1=f1)
    present = [c for c in classes if any(t == c for t in truth)]
    macro = {
        m: _mean([per_class[c][m] for c in present]) for m in ("precision", "recall", "f1")
    }
    return per_class, macro


def oracle_split_gain(X, grad, hess, feature, threshold, reg_lambda, gamma, min_child_weight):
    """Second-order gain of one concrete split; None when the split is invalid."""
    G, H = grad.sum(), hess.sum()
    left = X[:, feature] <= threshold
    gl, hl = grad[left].sum(), hess[left].sum()
    gr, hr = G - gl, H - hl
    if hl < min_child_weight or hr < min_child_weight:
        return None
    base = G * G / (H + reg_lambda)
    return 0.5 * (gl * gl / (hl + reg_lambda) + gr * gr / (hr + reg_lambda) - base) - gamma


def oracle_best_split(X, grad, hess, reg_lambda, gamma, min_child_weight):
    """Exhaustive best (gain, feature, threshold) by second-order gain.

    Gains over discrete gradients tie frequently, so callers should treat any
    split achieving the returned gain as optimal.
    """
    n, d = X.shape
    best = None  # (gain, feature, threshold)
    for j in range(d):
        values = sorted(set(X[:, j]))
        for a, b in zip(values, values[1:]):
            thr = (a + b) / 2.0
            gain = oracle_split_gain(X, grad, hess, j, thr, reg_lambda, gamma, min_child_weight)
            if gain is not None and gain > 0 and (best is None or gain > best[0] + 1e-12):
                best = (gain, j, thr)
    return best
