"""Classification metrics: per-class confusion counts, precision, recall, f1.

Averages are macro (unweighted over the classes present in the truth).
"""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import ValidationError


@dataclass
class ClassCounts:
    tp: int = 0
    fp: int = 0
    fn: int = 0
    tn: int = 0


@dataclass
class ConfusionMatrix:
    classes: list[str]
    per_class: dict[str, ClassCounts]
    support: dict[str, int]


@dataclass
class Metrics:
    per_class: dict[str, dict[str, float]]  # class -> {precision, recall, f1}
    macro_precision: float
    macro_recall: float
    macro_f1: float


def _prf(c: ClassCounts) -> dict[str, float]:
    precision = c.tp / (c.tp + c.fp) if c.tp + c.fp else 0.0
    recall = c.tp / (c.tp + c.fn) if c.tp + c.fn else 0.0
    # harmonic mean of precision and recall, written in counts so exact
    # rationals stay exact (2pr/(p+r) == 2tp/(2tp+fp+fn) when defined)
    f1 = 0.0
    if precision + recall > 0:
        f1 = 2 * c.tp / (2 * c.tp + c.fp + c.fn)
    return {"precision": precision, "recall": recall, "f1": f1}


def evaluate(predictions: list[str], truth: list[str]) -> tuple[ConfusionMatrix, Metrics]:
    if len(predictions) != len(truth):
        raise ValidationError(
            f"{len(predictions)} predictions for {len(truth)} truths", field="predictions"
        )
    if not truth:
        raise ValidationError("nothing to evaluate", field="truth")

    classes = sorted(set(truth) | set(predictions))
    counts = {c: ClassCounts() for c in classes}
    support = {c: 0 for c in classes}
    for t, p in zip(truth, predictions):
        support[t] += 1
        for c in classes:
            if t == c and p == c:
                counts[c].tp += 1
            elif t != c and p == c:
                counts[c].fp += 1
            elif t == c and p != c:
                counts[c].fn += 1
            else:
                counts[c].tn += 1

    cm = ConfusionMatrix(classes, counts, support)
    per_class = {c: _prf(counts[c]) for c in classes}
    present = [c for c in classes if support[c] > 0]
    macro = {
        key: sum(per_class[c][key] for c in present) / len(present)
        for key in ("precision", "recall", "f1")
    }
    return cm, Metrics(per_class, macro["precision"], macro["recall"], macro["f1"])


def macro_f1(predictions: list[str], truth: list[str]) -> float:
    return evaluate(predictions, truth)[1].macro_f1
