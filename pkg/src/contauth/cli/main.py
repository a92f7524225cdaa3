"""Operator command line.

Batch subcommands run the pipeline locally; `serve` starts the scoring
service and `replay` drives it over HTTP.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

from ..errors import ContauthError
from ..events.generate import iter_stream
from ..events.log_io import iter_event_log, write_event_log
from ..events.profiles import demo_profiles, load_profiles, save_profiles
from ..features.csv_io import read_feature_csv, write_feature_csv
from ..features.extract import extract_stream
from ..features.schema import MOBILE_SCHEMA_ID, PC_SCHEMA_ID
from ..models.metrics import evaluate
from ..models.search import grid_search, leaderboard_csv
from ..models.spec import ModelSpec
from ..models.train import load_model, save_model, train
from ..pipeline.dataset import LabeledDataset
from ..pipeline.datasets import active_minutes
from ..pipeline.split import segment_split
from ..pipeline.usage import activity_map, derive_usage_features, usage_dataset
from .experiment import ExperimentConfig, run_experiment


def _parse_hyper(pairs: list[str]) -> dict:
    out = {}
    for pair in pairs:
        if "=" not in pair:
            raise ContauthError(f"hyperparameter {pair!r} must be name=value")
        name, _, value = pair.partition("=")
        out[name] = json.loads(value)
    return out


def cmd_generate(args) -> int:
    if args.profiles:
        profiles = load_profiles(args.profiles)
    else:
        profiles = demo_profiles(args.users)
        if args.save_profiles:
            save_profiles(profiles, args.save_profiles)
    start_ms = args.start_minute * 60_000
    total = 0
    with open(args.out, "w", newline="") as fh:
        import csv
        import heapq

        from ..events.log_io import HEADER, _payload_cells

        w = csv.writer(fh)
        w.writerow(HEADER)
        streams = [
            iter_stream(p, start_ms, args.minutes, args.seed) for p in profiles
        ]
        merged = heapq.merge(*streams, key=lambda e: e.timestamp)
        for ev in merged:
            w.writerow([ev.timestamp, ev.user_id, ev.device_id, ev.payload_kind] + _payload_cells(ev))
            total += 1
    print(f"wrote {total} events to {args.out}")
    return 0


def cmd_extract(args) -> int:
    vectors = extract_stream(iter_event_log(args.events), window_s=args.window_s)
    pc = [v for v in vectors if v.schema_id == PC_SCHEMA_ID]
    mobile = [v for v in vectors if v.schema_id == MOBILE_SCHEMA_ID]
    if pc and args.out_pc:
        write_feature_csv(pc, args.out_pc)
        print(f"wrote {len(pc)} pc vectors to {args.out_pc}")
    if mobile and args.out_mobile:
        write_feature_csv(mobile, args.out_mobile)
        print(f"wrote {len(mobile)} mobile vectors to {args.out_mobile}")
    return 0


def cmd_derive(args) -> int:
    vectors = extract_stream(iter_event_log(args.events), window_s=60.0)
    states = activity_map(
        active_minutes(vectors, PC_SCHEMA_ID), active_minutes(vectors, MOBILE_SCHEMA_ID)
    )
    usage = usage_dataset(derive_usage_features(states, args.window))
    usage.to_csv(args.out)
    usage.write_sidecar(Path(args.out).with_suffix(".json"), kind="usage", window_minutes=args.window)
    print(f"wrote {usage.n_rows} usage vectors to {args.out}")
    return 0


def cmd_split(args) -> int:
    ds = LabeledDataset.from_csv(args.dataset)
    split = segment_split(ds, args.segment_minutes, args.test_fraction, args.val_fraction, args.seed)
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    split.train.to_csv(out / "train.csv")
    split.test.to_csv(out / "test.csv")
    if split.validation is not None:
        split.validation.to_csv(out / "validation.csv")
    split.save_manifest(out / "split_manifest.json")
    print(f"train={split.train.n_rows} val={0 if split.validation is None else split.validation.n_rows} "
          f"test={split.test.n_rows} -> {out}")
    return 0


def cmd_train(args) -> int:
    train_ds = LabeledDataset.from_csv(args.dataset)
    val_ds = LabeledDataset.from_csv(args.validation) if args.validation else None
    spec = ModelSpec(args.family, _parse_hyper(args.hyper), seed=args.seed)
    model = train(spec, train_ds, val_ds)
    save_model(model, args.out)
    print(f"trained {args.family} on {train_ds.n_rows} rows -> {args.out}")
    return 0


def cmd_search(args) -> int:
    train_ds = LabeledDataset.from_csv(args.dataset)
    val_ds = LabeledDataset.from_csv(args.validation)
    space = json.loads(Path(args.space).read_text()) if Path(args.space).exists() else json.loads(args.space)
    best, board = grid_search(args.family, space, train_ds, val_ds, budget=args.budget, seed=args.seed)
    leaderboard_csv(board, args.out)
    print(f"best {args.family} spec: {best.hyperparameters} (macro-f1 {board[0].macro_f1:.4f}); "
          f"leaderboard -> {args.out}")
    return 0


def cmd_evaluate(args) -> int:
    model = load_model(args.model)
    ds = LabeledDataset.from_csv(args.dataset)
    predicted = model.predict_labels(ds.rows)
    confusion, metrics = evaluate(predicted, list(ds.labels))
    rows = [f"{cls}: precision={metrics.per_class[cls]['precision']:.4f} "
            f"recall={metrics.per_class[cls]['recall']:.4f} f1={metrics.per_class[cls]['f1']:.4f}"
            for cls in confusion.classes]
    print("\n".join(rows))
    print(f"macro: precision={metrics.macro_precision:.4f} recall={metrics.macro_recall:.4f} "
          f"f1={metrics.macro_f1:.4f}")
    if args.out:
        import csv

        with open(args.out, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["class", "precision", "recall", "f1"])
            for cls in confusion.classes:
                m = metrics.per_class[cls]
                w.writerow([cls, repr(m["precision"]), repr(m["recall"]), repr(m["f1"])])
            w.writerow(["__macro__", repr(metrics.macro_precision),
                        repr(metrics.macro_recall), repr(metrics.macro_f1)])
    return 0


def cmd_fuse(args) -> int:
    from .experiment import BLOCK_SIZES  # noqa: F401  (re-export safety)
    from ..pipeline.fusion import fuse_timeline, fused_dataset
    from ..features.schema import MinuteFeatureVector

    bundle = json.loads(Path(args.bundle).read_text())
    schema_by_kind = {s["device_kind"]: s for s in bundle["schemas"]}
    from ..pipeline.preprocess import project_features

    pc_vecs, mapp_vecs, sens_vecs = [], [], []
    for path, kind in ((args.pc, "pc"), (args.mobile, "mobile")):
        if not path:
            continue
        schema = schema_by_kind[kind]
        names = schema["feature_names"]
        cats = schema.get("categorical_categories", {})
        for vec in read_feature_csv(path):
            values = project_features(vec.features, names, cats)
            if kind == "pc":
                pc_vecs.append(MinuteFeatureVector(
                    vec.user_id, "pc", vec.minute_index, dict(zip(names, values)), "pc"))
            else:
                mapp_names, sens_names = names[:50], names[50:]
                mapp_vecs.append(MinuteFeatureVector(
                    vec.user_id, "mobile", vec.minute_index,
                    dict(zip(mapp_names, values[:50])), "mapp"))
                sens_vecs.append(MinuteFeatureVector(
                    vec.user_id, "mobile", vec.minute_index,
                    dict(zip(sens_names, values[50:])), "sens"))
    pc_schema = schema_by_kind.get("pc", {"feature_names": []})
    mobile_schema = schema_by_kind.get("mobile", {"feature_names": []})
    fused = fuse_timeline(pc_vecs, mapp_vecs, sens_vecs)
    ds = fused_dataset(
        fused,
        pc_schema["feature_names"],
        mobile_schema["feature_names"][:50],
        mobile_schema["feature_names"][50:],
    )
    ds.to_csv(args.out)
    ds.write_sidecar(Path(args.out).with_suffix(".json"), kind="fused")
    print(f"wrote {ds.n_rows} fused vectors to {args.out}")
    return 0


def cmd_sequence(args) -> int:
    import numpy as np

    from ..pipeline.sequences import UserTimeline, build_sequences

    fused = LabeledDataset.from_csv(args.fused)
    start = int(fused.minute_index.min()) if args.start_minute is None else args.start_minute
    length = args.minutes or int(fused.minute_index.max()) - start + 1
    total = 0
    arrays = {}
    for user in sorted(set(fused.labels)):
        tl = UserTimeline(user, start, length, width=fused.n_features)
        for i in range(fused.n_rows):
            if fused.labels[i] != user:
                continue
            off = int(fused.minute_index[i]) - start
            if 0 <= off < length:
                tl.active[off] = fused.rows[i]
        seq = build_sequences(tl, args.T).active()
        total += len(seq)
        arrays[user] = np.stack([seq.matrix(i) for i in range(len(seq))]) if len(seq) else np.zeros((0, args.T, fused.n_features))
    np.savez_compressed(args.out, **arrays)
    Path(args.out).with_suffix(".json").write_text(json.dumps({
        "feature_names": fused.feature_names,
        "window_minutes": args.T,
        "fill_value": -1.0,
        "windows": total,
    }, indent=2))
    print(f"wrote {total} active windows of length {args.T} to {args.out}")
    return 0


def cmd_experiment(args) -> int:
    config = ExperimentConfig.from_yaml(args.config)
    if args.seed is not None:
        config.seed = args.seed
    if args.output_dir:
        config.output_dir = args.output_dir
    report = run_experiment(config)
    for run in report.runs:
        m = run.metrics
        print(f"{run.name}: macro precision={m.macro_precision:.4f} "
              f"recall={m.macro_recall:.4f} f1={m.macro_f1:.4f} "
              f"(train={run.n_train}, test={run.n_test})")
    print(f"artifacts in {config.output_dir}")
    return 0


def cmd_replay(args) -> int:
    from .replay_client import replay_to_service

    speed = math.inf if args.speed in ("inf", "max") else float(args.speed)
    summary = replay_to_service(args.events, args.endpoint, speed=speed, token=args.token)
    print(f"envelopes sent: {summary.envelopes_sent}")
    print(f"decisions received: {summary.decisions}")
    print(f"action histogram: {dict(summary.actions)}")
    print(f"median ingest-to-decision latency: {summary.median_latency_s * 1000:.1f} ms")
    if summary.errors:
        print(f"errors: ingest={summary.ingest_errors} score={summary.score_errors}", file=sys.stderr)
        return 1
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from ..service.app import create_app, empty_config
    from ..service.schemas import ConfigRequest
    from ..service.app import build_config
    from ..service.state import ServiceState

    state = ServiceState(empty_config())
    if args.config:
        body = json.loads(Path(args.config).read_text())
        request = ConfigRequest(**body)
        state.configure(build_config(request, state.next_version(), state.config))
    app = create_app(state, api_token=args.token)
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return 0


def _uniform_seed(p: argparse.ArgumentParser) -> None:
    # deterministic commands still take --seed so every subcommand shares
    # the same interface
    p.add_argument("--seed", type=int, default=0,
                   help="accepted for interface uniformity; this command is deterministic")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="contauth", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="generate a synthetic event log")
    p.add_argument("--profiles", help="JSON profile file (default: built-in demo profiles)")
    p.add_argument("--users", type=int, default=5)
    p.add_argument("--minutes", type=int, required=True)
    p.add_argument("--start-minute", type=int, default=0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--save-profiles", help="write the demo profiles used")
    p.add_argument("--out", required=True)
    p.set_defaults(fn=cmd_generate)

    p = sub.add_parser("extract", help="event log -> per-minute feature CSVs")
    p.add_argument("--events", required=True)
    p.add_argument("--window-s", type=float, default=60.0)
    p.add_argument("--out-pc")
    p.add_argument("--out-mobile")
    _uniform_seed(p)
    p.set_defaults(fn=cmd_extract)

    p = sub.add_parser("fuse", help="feature CSVs + schema bundle -> fused dataset CSV")
    p.add_argument("--pc")
    p.add_argument("--mobile")
    p.add_argument("--bundle", required=True, help="schema bundle from an experiment run")
    p.add_argument("--out", required=True)
    _uniform_seed(p)
    p.set_defaults(fn=cmd_fuse)

    p = sub.add_parser("derive", help="event log -> usage-rhythm dataset CSV")
    p.add_argument("--events", required=True)
    p.add_argument("--window", type=int, default=1440)
    p.add_argument("--out", required=True)
    _uniform_seed(p)
    p.set_defaults(fn=cmd_derive)

    p = sub.add_parser("sequence", help="fused CSV -> sliding windows (npz + sidecar)")
    p.add_argument("--fused", required=True)
    p.add_argument("--T", type=int, required=True)
    p.add_argument("--start-minute", type=int)
    p.add_argument("--minutes", type=int)
    p.add_argument("--out", required=True)
    _uniform_seed(p)
    p.set_defaults(fn=cmd_sequence)

    p = sub.add_parser("split", help="dataset CSV -> leakage-safe train/val/test")
    p.add_argument("--dataset", required=True)
    p.add_argument("--segment-minutes", type=int, default=10)
    p.add_argument("--test-fraction", type=float, default=0.10)
    p.add_argument("--val-fraction", type=float, default=0.10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out-dir", required=True)
    p.set_defaults(fn=cmd_split)

    p = sub.add_parser("train", help="train one model on a dataset CSV")
    p.add_argument("--dataset", required=True)
    p.add_argument("--validation")
    p.add_argument("--family", required=True)
    p.add_argument("--hyper", nargs="*", default=[], help="name=value (JSON values)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(fn=cmd_train)

    p = sub.add_parser("search", help="hyperparameter grid search")
    p.add_argument("--dataset", required=True)
    p.add_argument("--validation", required=True)
    p.add_argument("--family", required=True)
    p.add_argument("--space", required=True, help="JSON file or inline JSON")
    p.add_argument("--budget", type=int, default=16)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(fn=cmd_search)

    p = sub.add_parser("evaluate", help="evaluate a saved model on a dataset CSV")
    p.add_argument("--model", required=True)
    p.add_argument("--dataset", required=True)
    p.add_argument("--out")
    _uniform_seed(p)
    p.set_defaults(fn=cmd_evaluate)

    p = sub.add_parser("experiment", help="run a full experiment from a YAML config")
    p.add_argument("--config", required=True)
    p.add_argument("--seed", type=int)
    p.add_argument("--output-dir")
    p.set_defaults(fn=cmd_experiment)

    p = sub.add_parser("replay", help="replay an event log against a running service")
    p.add_argument("--events", required=True)
    p.add_argument("--endpoint", required=True)
    p.add_argument("--speed", default="inf")
    p.add_argument("--token", default="contauth-dev-token")
    _uniform_seed(p)
    p.set_defaults(fn=cmd_replay)

    p = sub.add_parser("serve", help="run the scoring service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--config", help="JSON service configuration (schemas, models, rules)")
    p.add_argument("--token", default="contauth-dev-token")
    _uniform_seed(p)
    p.set_defaults(fn=cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except (ContauthError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
