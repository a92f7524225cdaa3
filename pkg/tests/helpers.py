"""Shared test plumbing: real-socket service hosting and service assembly."""

from __future__ import annotations

import socket
import threading
import time
from contextlib import contextmanager

import uvicorn

from contauth.models import load_model
from contauth.service import (
    DeviceNotifier,
    SchemaDef,
    ScoringModel,
    ServiceConfig,
    ServiceState,
    create_app,
    default_rules,
)


def free_port() -> int:
    sock = socket.socket()
    sock.bind(("127.0.0.1", 0))
    port = sock.getsockname()[1]
    sock.close()
    return port


@contextmanager
def live_server(app):
    port = free_port()
    config = uvicorn.Config(app, host="127.0.0.1", port=port, log_level="error")
    server = uvicorn.Server(config)
    thread = threading.Thread(target=server.run, daemon=True)
    thread.start()
    deadline = time.time() + 10
    while not server.started:
        if time.time() > deadline:
            raise RuntimeError("server did not start")
        time.sleep(0.02)
    try:
        yield f"http://127.0.0.1:{port}"
    finally:
        server.should_exit = True
        thread.join(timeout=5)


def schema_defs_from_bundle(bundle: dict) -> dict[str, SchemaDef]:
    defs = {}
    for s in bundle["schemas"]:
        cats = tuple(sorted(
            (col, tuple(codes)) for col, codes in s.get("categorical_categories", {}).items()
        ))
        defs[s["schema_id"]] = SchemaDef(
            s["schema_id"], s["device_kind"], tuple(s["blocks"]), tuple(s["feature_names"]), cats
        )
    return defs


def state_from_artifacts(report, bundle, model_key="model_fused",
                         sequence_model_path=None, sequence_length=None) -> ServiceState:
    model = load_model(report.artifacts[model_key])
    models = [ScoringModel("fused", model, 1.0, None)]
    if sequence_model_path is not None:
        seq_model = load_model(sequence_model_path)
        models = [
            ScoringModel("fused", model, 0.5, None),
            ScoringModel("seq", seq_model, 0.5, sequence_length or seq_model.window_length),
        ]
    config = ServiceConfig(
        version=1,
        window_s=60.0,
        models=tuple(models),
        rules=tuple(default_rules()),
        tiers=("standard",),
        schemas=schema_defs_from_bundle(bundle),
    )
    return ServiceState(config)


def quiet_notifier() -> DeviceNotifier:
    import httpx

    return DeviceNotifier(
        transport=httpx.MockTransport(lambda request: httpx.Response(200)),
        sleep=lambda s: None,
    )


def make_service_app(report, bundle, **kwargs):
    state = state_from_artifacts(report, bundle, **kwargs)
    return create_app(state, notifier=quiet_notifier()), state
