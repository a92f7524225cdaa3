"""End-to-end experiment runner.

Builds the behavioural corpus (synthetic or from an event log), constructs
the requested dataset variant, runs the leakage-safe split, trains and
evaluates models, and writes all artifacts needed to re-evaluate without
retraining: dataset CSVs, split manifests, model files, selection reports,
the service schema bundle and a metrics CSV.
"""

from __future__ import annotations

import csv
import json
import shutil
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import yaml

from ..errors import ContauthError, ValidationError
from ..events.generate import iter_stream
from ..events.log_io import iter_event_log
from ..events.profiles import UserProfile, demo_profiles, load_profiles
from ..features.extract import extract_stream
from ..features.schema import (
    MOBILE_APP_CATEGORICAL,
    MOBILE_SCHEMA_ID,
    PC_CATEGORICAL,
    PC_SCHEMA_ID,
    MinuteFeatureVector,
)
from ..models.metrics import ConfusionMatrix, Metrics, evaluate
from ..models.search import grid_search, leaderboard_csv
from ..models.spec import ModelSpec
from ..models.train import feature_importances, save_model, train
from ..pipeline.dataset import LabeledDataset
from ..pipeline.datasets import active_minutes, mobile_app_dataset, pc_dataset, sensor_dataset
from ..pipeline.fusion import fuse_timeline, fused_dataset
from ..pipeline.preprocess import drop_constant_features, importance_select, one_hot_encode
from ..pipeline.sequences import SequenceDataset, UserTimeline, build_sequences, concat_sequences
from ..pipeline.split import SplitResult, segment_split
from ..pipeline.usage import derive_usage_features, usage_dataset

DATASETS = ("1", "2", "3", "4", "5", "sequence")
BLOCK_SIZES = {"pc": 150, "mapp": 50, "sens": 40}


class StageError(ContauthError):
    def __init__(self, stage: str, cause: Exception):
        self.stage = stage
        self.cause = cause
        super().__init__(f"stage {stage!r} failed: {cause}")


@dataclass
class ExperimentConfig:
    dataset: str = "4"
    output_dir: str = "experiment-out"
    seed: int = 0

    # corpus: either an event log or synthetic profiles
    event_log: str | None = None
    profiles_file: str | None = None
    n_users: int = 5
    days: int = 3
    start_minute: int = 0  # should be midnight-aligned
    window_s: float = 60.0

    # selection
    importance_mode: str = "top_k"  # "top_k" | "cumulative"
    importance_threshold: float = 0.95
    select_pc: int = 150
    select_mapp: int = 50
    select_sens: int = 40
    selection_families: dict = field(
        default_factory=lambda: {"pc": "gbt", "mapp": "rf", "sens": "rf"}
    )
    selection_rows: int = 3000
    selection_depth: int = 4
    selection_rounds: int = 6
    selection_trees: int = 20

    # split
    segment_minutes: int = 10
    test_fraction: float = 0.10
    val_fraction: float = 0.10

    # training
    family: str = "gbt"
    hyperparameters: dict = field(default_factory=dict)
    search_space: dict | None = None
    search_budget: int = 16
    max_rows: int | None = None

    # dataset 5
    usage_window: int = 1440

    # sequences
    sequence_length: int = 60
    sequence_stride: int = 1
    max_windows_per_user: int | None = None
    day_fractions: tuple = (0.7, 0.15, 0.15)

    def validate(self) -> None:
        if self.dataset not in DATASETS:
            raise ValidationError(f"dataset must be one of {DATASETS}", field="dataset")
        for attr in ("event_log", "profiles_file"):
            path = getattr(self, attr)
            if path is not None and not Path(path).exists():
                raise ValidationError(f"file {path!r} does not exist", field=attr)
        if self.event_log is None and self.profiles_file is None and not 2 <= self.n_users <= 5:
            raise ValidationError("synthetic corpus needs 2..5 users", field="n_users")
        if self.days < 1:
            raise ValidationError("must be >= 1", field="days")
        if self.importance_mode not in ("top_k", "cumulative"):
            raise ValidationError("mode must be top_k or cumulative", field="importance_mode")
        if self.dataset == "sequence" and self.family != "lstm":
            raise ValidationError("sequence experiments train the lstm family", field="family")
        if self.family == "lstm" and self.dataset != "sequence":
            raise ValidationError("the lstm family needs dataset=sequence", field="dataset")

    @classmethod
    def from_yaml(cls, path: str | Path) -> "ExperimentConfig":
        raw = yaml.safe_load(Path(path).read_text()) or {}
        known = set(cls.__dataclass_fields__)
        unknown = set(raw) - known
        if unknown:
            raise ValidationError(f"unknown config keys {sorted(unknown)}", field="config")
        if "day_fractions" in raw:
            raw["day_fractions"] = tuple(raw["day_fractions"])
        return cls(**raw)


@dataclass
class RunResult:
    name: str
    family: str
    metrics: Metrics
    confusion: ConfusionMatrix
    model_path: str
    n_train: int
    n_test: int


@dataclass
class ExperimentReport:
    runs: list[RunResult]
    artifacts: dict[str, str]

    def run(self, name: str) -> RunResult:
        for r in self.runs:
            if r.name == name:
                return r
        raise KeyError(name)


class _Workspace:
    """Tracks created artifact files so failures can clean up."""

    def __init__(self, out_dir: Path):
        self.out_dir = out_dir
        self.created_dir = not out_dir.exists()
        out_dir.mkdir(parents=True, exist_ok=True)
        self.created: list[Path] = []

    def path(self, name: str) -> Path:
        p = self.out_dir / name
        self.created.append(p)
        return p

    def cleanup(self) -> None:
        if self.created_dir:
            shutil.rmtree(self.out_dir, ignore_errors=True)
            return
        for p in self.created:
            if p.exists():
                p.unlink()


def _corpus_profiles(config: ExperimentConfig) -> list[UserProfile]:
    if config.profiles_file:
        return load_profiles(config.profiles_file)
    return demo_profiles(config.n_users)


def extract_corpus(config: ExperimentConfig) -> list[MinuteFeatureVector]:
    """Per-minute vectors for the whole corpus, streaming day by day."""
    if config.event_log:
        return extract_stream(iter_event_log(config.event_log), window_s=config.window_s)
    vectors: list[MinuteFeatureVector] = []
    start_ms = config.start_minute * 60_000
    for profile in _corpus_profiles(config):
        kinds = dict(profile.devices)
        for day in range(config.days):
            events = iter_stream(profile, start_ms + day * 1440 * 60_000, 1440, config.seed)
            vectors.extend(extract_stream(events, window_s=config.window_s, device_kinds=kinds))
    return vectors


def _subsample(ds: LabeledDataset, cap: int | None, seed: int) -> LabeledDataset:
    if cap is None or ds.n_rows <= cap:
        return ds
    rng = np.random.default_rng(seed)
    idx = np.sort(rng.choice(ds.n_rows, size=cap, replace=False))
    return ds.subset(idx)


def _selection_spec(config: ExperimentConfig, family: str, seed: int) -> ModelSpec:
    if family == "gbt":
        return ModelSpec(
            "gbt",
            {"lr": 0.3, "max_depth": config.selection_depth, "min_child_weight": 1.0,
             "gamma": 0.0, "colsample_bytree": 1.0, "n_rounds": config.selection_rounds},
            seed=seed,
        )
    if family == "rf":
        return ModelSpec(
            "random_forest",
            {"number_of_trees": config.selection_trees, "max_depth": 2 * config.selection_depth},
            seed=seed,
        )
    raise ValidationError(f"selection family must be gbt or rf, not {family}", field="selection_families")


@dataclass
class PreparedBlock:
    block: str
    dataset: LabeledDataset  # selected columns, all rows
    selected_names: list[str]
    categories: dict[str, list[int]]
    selection_report: dict


def prepare_block(
    config: ExperimentConfig,
    block: str,
    raw: LabeledDataset,
    categorical: tuple[str, ...],
) -> PreparedBlock:
    """Constant drop, one-hot, leakage-safe importance selection for one block."""
    ds, dropped = drop_constant_features(raw)
    cats_present = [c for c in categorical if c in ds.feature_names]
    encoded, encoder = one_hot_encode(ds, cats_present)

    split = segment_split(
        encoded, config.segment_minutes, config.test_fraction, config.val_fraction, config.seed
    )
    sel_family = config.selection_families.get(block, "gbt")
    sel_train = _subsample(split.train, config.selection_rows, config.seed)
    sel_model = train(_selection_spec(config, sel_family, config.seed), sel_train)
    importances = feature_importances(sel_model)

    if config.importance_mode == "top_k":
        k = min(BLOCK_SIZES[block], encoded.n_features)
        selected, report = importance_select(encoded, importances, mode="top_k", k=k)
    else:
        selected, report = importance_select(
            encoded, importances, mode="cumulative", threshold=config.importance_threshold
        )
    report["constant_dropped"] = dropped
    report["selection_family"] = sel_family
    return PreparedBlock(block, selected, selected.feature_names, encoder.categories, report)


def _rows_to_vectors(ds: LabeledDataset, schema_id: str) -> list[MinuteFeatureVector]:
    out = []
    for i in range(ds.n_rows):
        out.append(
            MinuteFeatureVector(
                ds.labels[i],
                "pc" if schema_id == "pc" else "mobile",
                int(ds.minute_index[i]),
                dict(zip(ds.feature_names, ds.rows[i])),
                schema_id,
            )
        )
    return out


def fuse_blocks(pc: PreparedBlock, mapp: PreparedBlock, sens: PreparedBlock) -> LabeledDataset:
    for block in (pc, mapp, sens):
        if len(block.selected_names) != BLOCK_SIZES[block.block]:
            raise ValidationError(
                f"{block.block} selection produced {len(block.selected_names)} features, "
                f"fusion needs exactly {BLOCK_SIZES[block.block]} (use importance_mode=top_k)",
                field="importance_mode",
            )
    fused = fuse_timeline(
        _rows_to_vectors(pc.dataset, "pc"),
        _rows_to_vectors(mapp.dataset, "mapp"),
        _rows_to_vectors(sens.dataset, "sens"),
    )
    return fused_dataset(fused, pc.selected_names, mapp.selected_names, sens.selected_names)


def _train_and_eval(
    config: ExperimentConfig,
    name: str,
    split: SplitResult,
    ws: _Workspace,
    artifacts: dict[str, str],
) -> RunResult:
    train_ds = _subsample(split.train, config.max_rows, config.seed)
    spec = ModelSpec(config.family, dict(config.hyperparameters), seed=config.seed)
    if config.search_space:
        if split.validation is None:
            raise ValidationError("search needs a validation split", field="val_fraction")
        best, board = grid_search(
            config.family, config.search_space, train_ds, split.validation,
            budget=config.search_budget, seed=config.seed,
        )
        leaderboard_path = ws.path(f"leaderboard_{name}.csv")
        leaderboard_csv(board, leaderboard_path)
        artifacts[f"leaderboard_{name}"] = str(leaderboard_path)
        spec = ModelSpec(best.family, dict(best.hyperparameters), seed=config.seed)

    model = train(spec, train_ds, split.validation)
    predicted = model.predict_labels(split.test.rows)
    confusion, metrics = evaluate(predicted, list(split.test.labels))

    model_path = ws.path(f"model_{name}.json")
    save_model(model, model_path)
    artifacts[f"model_{name}"] = str(model_path)
    return RunResult(name, config.family, metrics, confusion, str(model_path),
                     train_ds.n_rows, split.test.n_rows)


def _split_and_store(config, name, ds, ws, artifacts) -> SplitResult:
    split = segment_split(
        ds, config.segment_minutes, config.test_fraction, config.val_fraction, config.seed
    )
    dataset_path = ws.path(f"dataset_{name}.csv")
    ds.to_csv(dataset_path)
    sidecar = ws.path(f"dataset_{name}.json")
    ds.write_sidecar(sidecar, kind=name, segment_minutes=config.segment_minutes)
    manifest_path = ws.path(f"split_{name}.json")
    split.save_manifest(manifest_path)
    artifacts[f"dataset_{name}"] = str(dataset_path)
    artifacts[f"split_{name}"] = str(manifest_path)
    return split


def _write_metrics_csv(path: Path, runs: list[RunResult]) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["run", "class", "precision", "recall", "f1", "support"])
        for run in runs:
            m = run.metrics
            for cls in run.confusion.classes:
                w.writerow([
                    run.name, cls,
                    repr(m.per_class[cls]["precision"]),
                    repr(m.per_class[cls]["recall"]),
                    repr(m.per_class[cls]["f1"]),
                    run.confusion.support[cls],
                ])
            w.writerow([run.name, "__macro__", repr(m.macro_precision),
                        repr(m.macro_recall), repr(m.macro_f1), run.n_test])


def _write_schema_bundle(path: Path, pc: PreparedBlock, mapp: PreparedBlock, sens: PreparedBlock) -> None:
    mobile_cats = dict(mapp.categories)
    mobile_cats.update(sens.categories)
    bundle = {
        "schemas": [
            {
                "schema_id": "pc-sel.v1",
                "device_kind": "pc",
                "blocks": ["pc"],
                "feature_names": pc.selected_names,
                "categorical_categories": pc.categories,
            },
            {
                "schema_id": "mobile-sel.v1",
                "device_kind": "mobile",
                "blocks": ["mapp", "sens"],
                "feature_names": mapp.selected_names + sens.selected_names,
                "categorical_categories": mobile_cats,
            },
        ]
    }
    path.write_text(json.dumps(bundle, indent=2))


def _sequence_corpus(config: ExperimentConfig, fused: LabeledDataset):
    """Per-user timelines over the configured period, then stride/cap sampling."""
    T = config.sequence_length
    length = config.days * 1440
    users = sorted(set(fused.labels))
    parts = {"train": [], "validation": [], "test": []}
    n_train_days = max(1, int(round(config.day_fractions[0] * config.days)))
    n_val_days = max(0, int(round(config.day_fractions[1] * config.days)))

    def day_part(day: int) -> str:
        if day < n_train_days:
            return "train"
        if day < n_train_days + n_val_days:
            return "validation"
        return "test"

    rng = np.random.default_rng(config.seed)
    for user in users:
        idx = [i for i, u in enumerate(fused.labels) if u == user]
        tl = UserTimeline(user, config.start_minute, length, width=fused.n_features)
        for i in idx:
            off = int(fused.minute_index[i]) - config.start_minute
            if 0 <= off < length:
                tl.active[off] = fused.rows[i]
        seq = build_sequences(tl, T)
        per_part: dict[str, list[int]] = {"train": [], "validation": [], "test": []}
        for w in range(0, len(seq), config.sequence_stride):
            if not seq.is_active(w):
                continue
            per_part[day_part(w // 1440)].append(w)
        for part, windows in per_part.items():
            cap = config.max_windows_per_user
            if cap is not None and len(windows) > cap:
                keep = np.sort(rng.choice(len(windows), size=cap, replace=False))
                windows = [windows[int(i)] for i in keep]
            if windows:
                parts[part].append(seq.subset(windows))

    def cat(lst) -> SequenceDataset | None:
        return concat_sequences(lst) if lst else None

    return cat(parts["train"]), cat(parts["validation"]), cat(parts["test"])


def run_experiment(
    config: ExperimentConfig,
    vectors: list[MinuteFeatureVector] | None = None,
) -> ExperimentReport:
    """Run one experiment; `vectors` may carry a pre-extracted corpus so
    several experiments can share one extraction pass."""
    config.validate()
    ws = _Workspace(Path(config.output_dir))
    artifacts: dict[str, str] = {}
    runs: list[RunResult] = []

    def stage(name):
        class _Stage:
            def __enter__(self):
                return None

            def __exit__(self, exc_type, exc, tb):
                if exc is not None:
                    ws.cleanup()
                    raise StageError(name, exc) from exc
                return False

        return _Stage()

    with stage("extract"):
        if vectors is None:
            vectors = extract_corpus(config)
        if not vectors:
            raise ValidationError("corpus produced no feature vectors", field="dataset")

    if config.dataset in ("1", "2", "3"):
        block = {"1": "pc", "2": "mapp", "3": "sens"}[config.dataset]
        with stage("preprocess"):
            raw = {
                "pc": lambda: pc_dataset(vectors),
                "mapp": lambda: mobile_app_dataset(vectors),
                "sens": lambda: sensor_dataset(vectors),
            }[block]()
            categorical = PC_CATEGORICAL if block == "pc" else (
                MOBILE_APP_CATEGORICAL if block == "mapp" else ()
            )
            prepared = prepare_block(config, block, raw, categorical)
            report_path = ws.path(f"selection_{block}.json")
            report_path.write_text(json.dumps(prepared.selection_report, indent=2))
            artifacts[f"selection_{block}"] = str(report_path)
        with stage("split"):
            split = _split_and_store(config, block, prepared.dataset, ws, artifacts)
        with stage("train"):
            runs.append(_train_and_eval(config, block, split, ws, artifacts))

    elif config.dataset == "4":
        with stage("preprocess"):
            prepared = {}
            for block, raw, categorical in (
                ("pc", pc_dataset(vectors), PC_CATEGORICAL),
                ("mapp", mobile_app_dataset(vectors), MOBILE_APP_CATEGORICAL),
                ("sens", sensor_dataset(vectors), ()),
            ):
                prepared[block] = prepare_block(config, block, raw, categorical)
                report_path = ws.path(f"selection_{block}.json")
                report_path.write_text(json.dumps(prepared[block].selection_report, indent=2))
                artifacts[f"selection_{block}"] = str(report_path)
            bundle_path = ws.path("schema_bundle.json")
            _write_schema_bundle(bundle_path, prepared["pc"], prepared["mapp"], prepared["sens"])
            artifacts["schema_bundle"] = str(bundle_path)
        with stage("fuse"):
            fused = fuse_blocks(prepared["pc"], prepared["mapp"], prepared["sens"])
        with stage("split"):
            splits = {name: _split_and_store(config, name, block.dataset, ws, artifacts)
                      for name, block in prepared.items()}
            splits["fused"] = _split_and_store(config, "fused", fused, ws, artifacts)
        with stage("train"):
            for name in ("pc", "mapp", "sens", "fused"):
                runs.append(_train_and_eval(config, name, splits[name], ws, artifacts))

    elif config.dataset == "5":
        with stage("derive"):
            pc_active = active_minutes(vectors, PC_SCHEMA_ID)
            mob_active = active_minutes(vectors, MOBILE_SCHEMA_ID)
            from ..pipeline.usage import activity_map

            usage_vecs = derive_usage_features(
                activity_map(pc_active, mob_active), config.usage_window
            )
            usage = usage_dataset(usage_vecs)
            if usage.n_rows == 0:
                raise ValidationError("no usage windows with activity", field="usage_window")
        with stage("split"):
            # usage windows are already long; hold out whole windows
            split = segment_split(
                usage, config.usage_window, config.test_fraction, config.val_fraction, config.seed
            )
            path = ws.path("dataset_usage.csv")
            usage.to_csv(path)
            usage.write_sidecar(ws.path("dataset_usage.json"), kind="usage",
                                window_minutes=config.usage_window)
            split.save_manifest(ws.path("split_usage.json"))
            artifacts["dataset_usage"] = str(path)
        with stage("train"):
            runs.append(_train_and_eval(config, "usage", split, ws, artifacts))

    else:  # sequence
        with stage("preprocess"):
            prepared = {}
            for block, raw, categorical in (
                ("pc", pc_dataset(vectors), PC_CATEGORICAL),
                ("mapp", mobile_app_dataset(vectors), MOBILE_APP_CATEGORICAL),
                ("sens", sensor_dataset(vectors), ()),
            ):
                prepared[block] = prepare_block(config, block, raw, categorical)
        with stage("sequence"):
            fused = fuse_blocks(prepared["pc"], prepared["mapp"], prepared["sens"])
            train_seq, val_seq, test_seq = _sequence_corpus(config, fused)
            if train_seq is None or test_seq is None:
                raise ValidationError("not enough active windows to split", field="days")
            sidecar = ws.path("sequence_dataset.json")
            sidecar.write_text(json.dumps({
                "feature_names": fused.feature_names,
                "window_minutes": config.sequence_length,
                "fill_value": -1.0,
                "train_windows": len(train_seq),
                "validation_windows": len(val_seq) if val_seq else 0,
                "test_windows": len(test_seq),
            }, indent=2))
            artifacts["sequence_dataset"] = str(sidecar)
        with stage("train"):
            spec = ModelSpec("lstm", dict(config.hyperparameters), seed=config.seed)
            model = train(spec, train_seq, val_seq)
            predicted = model.predict_dataset_labels(test_seq)
            confusion, metrics = evaluate(predicted, list(test_seq.labels))
            model_path = ws.path("model_sequence.json")
            save_model(model, model_path)
            artifacts["model_sequence"] = str(model_path)
            runs.append(RunResult("sequence", "lstm", metrics, confusion, str(model_path),
                                  len(train_seq), len(test_seq)))

    with stage("report"):
        metrics_path = ws.path("metrics.csv")
        _write_metrics_csv(metrics_path, runs)
        artifacts["metrics"] = str(metrics_path)
        config_path = ws.path("experiment_config.json")
        config_path.write_text(json.dumps(
            {k: (list(v) if isinstance(v, tuple) else v)
             for k, v in config.__dict__.items()}, indent=2, default=str))
        artifacts["config"] = str(config_path)

    return ExperimentReport(runs, artifacts)
