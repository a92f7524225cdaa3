"""Hyperparameter grid search ranked by validation macro-f1."""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass

import numpy as np

from ..errors import ValidationError
from ..pipeline.dataset import LabeledDataset
from ..pipeline.sequences import SequenceDataset
from .metrics import macro_f1
from .spec import ModelSpec
from .train import train


@dataclass
class SearchEntry:
    spec: ModelSpec
    macro_f1: float
    train_seconds: float
    order: int  # position in the enumerated grid


def enumerate_grid(family: str, space: dict[str, list]) -> list[ModelSpec]:
    if not space and family != "naive_bayes":
        raise ValidationError("empty search space", field="space")
    names = sorted(space)
    specs = []
    for combo in itertools.product(*(space[n] for n in names)) if names else [()]:
        spec = ModelSpec(family, dict(zip(names, combo)))
        spec.validate_search_ranges()
        specs.append(spec)
    if not specs:
        raise ValidationError("empty search space", field="space")
    return specs


def grid_search(
    family: str,
    space: dict[str, list],
    train_data: LabeledDataset | SequenceDataset,
    validation: LabeledDataset | SequenceDataset,
    budget: int = 32,
    seed: int = 0,
) -> tuple[ModelSpec, list[SearchEntry]]:
    """Evaluate up to `budget` configurations and return the winner.

    The full grid runs when it fits the budget; otherwise a uniform random
    subsample of `budget` configurations is drawn with the given seed. Ties
    on validation macro-f1 break towards faster training, then grid order.
    """
    if budget < 1:
        raise ValidationError("budget must be >= 1", field="budget")
    grid = enumerate_grid(family, space)
    if len(grid) > budget:
        rng = np.random.default_rng(seed)
        picked = sorted(rng.choice(len(grid), size=budget, replace=False))
        candidates = [(int(i), grid[int(i)]) for i in picked]
    else:
        candidates = list(enumerate(grid))

    if isinstance(validation, LabeledDataset):
        truth = list(validation.labels)
    else:
        truth = list(validation.labels)

    leaderboard: list[SearchEntry] = []
    for order, spec in candidates:
        spec = ModelSpec(spec.family, dict(spec.hyperparameters), seed=seed)
        started = time.perf_counter()
        model = train(spec, train_data, validation)
        elapsed = time.perf_counter() - started
        if isinstance(validation, LabeledDataset):
            predicted = model.predict_labels(validation.rows)
        else:
            predicted = model.predict_dataset_labels(validation)
        leaderboard.append(SearchEntry(spec, macro_f1(predicted, truth), elapsed, order))

    leaderboard.sort(key=lambda e: (-e.macro_f1, e.train_seconds, e.order))
    return leaderboard[0].spec, leaderboard


def leaderboard_csv(entries: list[SearchEntry], path) -> None:
    import csv

    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["rank", "macro_f1", "train_seconds", "hyperparameters", "seed"])
        for rank, e in enumerate(entries, start=1):
            w.writerow([rank, repr(e.macro_f1), repr(e.train_seconds), repr(e.spec.hyperparameters), e.spec.seed])
