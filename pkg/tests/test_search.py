import numpy as np
import pytest

from contauth.errors import ValidationError
from contauth.models import ModelSpec, grid_search
from contauth.pipeline import LabeledDataset


def flat_ds(X, labels):
    X = np.asarray(X, dtype=float)
    return LabeledDataset(
        [f"f{j}" for j in range(X.shape[1])],
        X,
        list(labels),
        np.arange(X.shape[0], dtype=np.int64),
    )


def knn_planted_sets(seed=0):
    """A 5-member cluster beside a 40-member one.

    k=3 classifies both clusters correctly; k=15 outvotes the small cluster
    (5 of its members vs 10 neighbours from the big one) and mislabels it.
    """
    rng = np.random.default_rng(seed)
    X, labels = [], []
    X.append(rng.normal(loc=0.0, scale=0.2, size=(5, 2)))
    labels += ["small"] * 5
    X.append(rng.normal(loc=3.0, scale=0.2, size=(40, 2)))
    labels += ["big"] * 40
    train = flat_ds(np.vstack(X), labels)
    Xv = np.vstack([
        rng.normal(loc=0.0, scale=0.2, size=(6, 2)),
        rng.normal(loc=3.0, scale=0.2, size=(6, 2)),
    ])
    val = flat_ds(Xv, ["small"] * 6 + ["big"] * 6)
    return train, val


class TestGridSearch:
    def test_singleton_space(self):
        train, val = knn_planted_sets()
        best, board = grid_search("knn", {"k": [4]}, train, val, budget=10)
        assert best.hyperparameters == {"k": 4}
        assert len(board) == 1

    def test_exhaustive_when_budget_allows(self):
        train, val = knn_planted_sets()
        _, board = grid_search("knn", {"k": [3, 5, 7, 9]}, train, val, budget=10)
        assert len(board) == 4

    def test_budget_subsamples(self):
        train, val = knn_planted_sets()
        _, board = grid_search("knn", {"k": list(range(3, 21))}, train, val, budget=5, seed=1)
        assert len(board) == 5

    def test_planted_k_dominates(self):
        train, val = knn_planted_sets(seed=3)
        best, board = grid_search("knn", {"k": [3, 15]}, train, val, budget=4)
        assert best.hyperparameters["k"] == 3
        by_k = {e.spec.hyperparameters["k"]: e.macro_f1 for e in board}
        assert by_k[3] > by_k[15]

    def test_leaderboard_sorted(self):
        train, val = knn_planted_sets(seed=5)
        _, board = grid_search("knn", {"k": [3, 7, 15]}, train, val, budget=8)
        f1s = [e.macro_f1 for e in board]
        assert f1s == sorted(f1s, reverse=True)

    def test_out_of_range_space_rejected(self):
        train, val = knn_planted_sets()
        with pytest.raises(ValidationError):
            grid_search("knn", {"k": [1]}, train, val, budget=2)

    def test_empty_space_rejected(self):
        train, val = knn_planted_sets()
        with pytest.raises(ValidationError):
            grid_search("knn", {}, train, val, budget=2)

    def test_naive_bayes_allows_empty_space(self):
        train, val = knn_planted_sets()
        best, board = grid_search("naive_bayes", {}, train, val, budget=2)
        assert best.family == "naive_bayes"
        assert len(board) == 1
