"""Model specifications and the tuneable hyperparameter ranges.

The declared ranges are the search ranges; grid_search refuses values
outside them. Direct training only applies basic sanity bounds so that
diagnostic fits (single-tree forests, k=1 neighbours) stay possible.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

from ..errors import ValidationError

FAMILIES = ("naive_bayes", "knn", "random_forest", "gbt", "mlp", "lstm")

# (low, high, is_integer) per searchable hyperparameter
SEARCH_RANGES: dict[str, dict[str, tuple[float, float, bool]]] = {
    "naive_bayes": {},
    "knn": {"k": (3, 20, True)},
    "gbt": {
        "lr": (0.01, 0.30, False),
        "max_depth": (3, 15, True),
        "min_child_weight": (1, 7, False),
        "gamma": (0.0, 0.5, False),
        "colsample_bytree": (0.3, 0.7, False),
    },
    "mlp": {"layers": (1, 5, True), "neurons_per_layer": (50, 1000, True)},
    "random_forest": {"number_of_trees": (50, 1000, True)},
    "lstm": {
        "lstm_layers": (1, 4, True),
        "nodes_per_layer": (16, 256, True),
        "dropout": (0.0, 0.5, False),
    },
}

# midpoint defaults for searchable knobs; lstm defaults follow the best
# performing architecture (2 layers of 64 and 32 nodes, 20% dropout)
DEFAULTS: dict[str, dict[str, Any]] = {
    "naive_bayes": {},
    "knn": {"k": 11},
    "gbt": {"lr": 0.155, "max_depth": 9, "min_child_weight": 4.0, "gamma": 0.25, "colsample_bytree": 0.5},
    "mlp": {"layers": 3, "neurons_per_layer": 525},
    "random_forest": {"number_of_trees": 525},
    "lstm": {"lstm_layers": 2, "nodes_per_layer": [64, 32], "dropout": 0.2},
}

# engine knobs outside the search space, with their sanity bounds
ENGINE_DEFAULTS: dict[str, dict[str, Any]] = {
    "naive_bayes": {},
    "knn": {},
    "gbt": {"n_rounds": 50, "reg_lambda": 1.0},
    "mlp": {"epochs": 200, "batch_size": 64, "learning_rate": 1e-3, "patience": 10},
    "random_forest": {"max_depth": None, "bootstrap": True},
    "lstm": {"epochs": 60, "batch_size": 64, "learning_rate": 1e-3, "patience": 10},
}


@dataclass
class ModelSpec:
    family: str
    hyperparameters: dict[str, Any] = field(default_factory=dict)
    seed: int = 0

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValidationError(f"unknown family {self.family!r}", field="family")
        known = set(SEARCH_RANGES[self.family]) | set(ENGINE_DEFAULTS[self.family])
        for name in self.hyperparameters:
            if name not in known:
                raise ValidationError(
                    f"{self.family} does not take hyperparameter {name!r}", field="hyperparameters"
                )
        self._check_sanity()

    def get(self, name: str):
        if name in self.hyperparameters:
            return self.hyperparameters[name]
        if name in DEFAULTS[self.family]:
            return DEFAULTS[self.family][name]
        return ENGINE_DEFAULTS[self.family][name]

    def _check_sanity(self) -> None:
        hp = self.hyperparameters
        f = self.family
        if f == "knn" and "k" in hp and int(hp["k"]) < 1:
            raise ValidationError("k must be >= 1", field="k")
        if f == "random_forest" and "number_of_trees" in hp and int(hp["number_of_trees"]) < 1:
            raise ValidationError("number_of_trees must be >= 1", field="number_of_trees")
        if f == "gbt":
            if "lr" in hp and not 0 < hp["lr"] <= 1:
                raise ValidationError("lr must be in (0,1]", field="lr")
            if "max_depth" in hp and int(hp["max_depth"]) < 1:
                raise ValidationError("max_depth must be >= 1", field="max_depth")
            if "colsample_bytree" in hp and not 0 < hp["colsample_bytree"] <= 1:
                raise ValidationError("colsample_bytree must be in (0,1]", field="colsample_bytree")
        if f in ("mlp", "lstm"):
            for key in ("layers", "lstm_layers"):
                if key in hp and int(hp[key]) < 1:
                    raise ValidationError(f"{key} must be >= 1", field=key)
            if "dropout" in hp and not 0 <= hp["dropout"] < 1:
                raise ValidationError("dropout must be in [0,1)", field="dropout")

    def validate_search_ranges(self) -> None:
        """Enforce the declared tuning ranges (used by hyperparameter search)."""
        for name, value in self.hyperparameters.items():
            bounds = SEARCH_RANGES[self.family].get(name)
            if bounds is None:
                continue
            lo, hi, is_int = bounds
            values = value if isinstance(value, (list, tuple)) else [value]
            for v in values:
                if not lo <= v <= hi:
                    raise ValidationError(
                        f"{name}={v} outside [{lo}, {hi}]", field=name
                    )
                if is_int and int(v) != v:
                    raise ValidationError(f"{name}={v} must be an integer", field=name)

    def to_dict(self) -> dict:
        return {"family": self.family, "hyperparameters": dict(self.hyperparameters), "seed": self.seed}

    @classmethod
    def from_dict(cls, d: dict) -> "ModelSpec":
        return cls(d["family"], dict(d.get("hyperparameters", {})), int(d.get("seed", 0)))
