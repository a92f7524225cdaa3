"""HTTP API for ingestion, scoring, policy decisions and device callbacks."""

from __future__ import annotations

from fastapi import Depends, FastAPI, Header, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse

from ..errors import ConfigurationError, ContauthError, NotFoundError, SchemaError, ValidationError
from ..models.lstm import LstmModel
from ..models.train import load_model
from .notify import DeviceNotifier
from .policy import PolicyRule, default_rules
from .schemas import (
    ConfigRequest,
    ConfigResponse,
    DecisionBody,
    DecisionLogEntry,
    DeviceRegistration,
    ErrorBody,
    IngestAck,
    IngestEnvelope,
    ScoreResponse,
    SchemaBody,
)
from .state import DeviceInfo, SchemaDef, ScoringModel, ServiceConfig, ServiceState

DEFAULT_TOKEN = "contauth-dev-token"

_STATUS = {
    ValidationError: 400,
    SchemaError: 400,
    ConfigurationError: 400,
    NotFoundError: 404,
}

_CODE = {
    ValidationError: "validation_error",
    SchemaError: "schema_error",
    ConfigurationError: "configuration_error",
    NotFoundError: "not_found",
}


def empty_config() -> ServiceConfig:
    return ServiceConfig(
        version=0,
        window_s=60.0,
        models=(),
        rules=tuple(default_rules()),
        tiers=("standard",),
        schemas={},
    )


def build_config(req: ConfigRequest, version: int, previous: ServiceConfig) -> ServiceConfig:
    schemas = dict(previous.schemas)
    if req.schemas is not None:
        schemas = {s.schema_id: _schema_def(s) for s in req.schemas}

    models: list[ScoringModel] = []
    if req.models is not None:
        for ref in req.models:
            model = load_model(ref.path)
            weight = ref.weight
            if req.weights is not None:
                if ref.name not in req.weights:
                    raise ConfigurationError(f"weights missing model {ref.name!r}")
                weight = req.weights[ref.name]
            seq_len = ref.sequence_length
            if isinstance(model, LstmModel) and seq_len is None:
                seq_len = model.window_length
            models.append(ScoringModel(ref.name, model, weight, seq_len))
    else:
        models = list(previous.models)
        if req.weights is not None:
            by_name = {m.name: m for m in models}
            if set(req.weights) != set(by_name):
                raise ConfigurationError("weights must name exactly the configured models")
            models = [
                ScoringModel(m.name, m.model, req.weights[m.name], m.sequence_length)
                for m in models
            ]

    rules = tuple(
        PolicyRule(
            r.rule_id, r.tier, r.min_score, r.max_score,
            r.min_inclusive, r.max_inclusive, r.action, r.priority,
        )
        for r in req.rules
    )
    return ServiceConfig(
        version=version,
        window_s=req.window_s,
        models=tuple(models),
        rules=rules,
        tiers=tuple(req.tiers),
        schemas=schemas,
    )


def _schema_def(body: SchemaBody) -> SchemaDef:
    cats = tuple(sorted((col, tuple(codes)) for col, codes in body.categorical_categories.items()))
    return SchemaDef(
        body.schema_id, body.device_kind, tuple(body.blocks), tuple(body.feature_names), cats
    )


def create_app(
    state: ServiceState | None = None,
    api_token: str = DEFAULT_TOKEN,
    notifier: DeviceNotifier | None = None,
) -> FastAPI:
    app = FastAPI(title="contauth scoring service")
    app.state.auth = state if state is not None else ServiceState(empty_config())
    app.state.notifier = notifier if notifier is not None else DeviceNotifier()
    app.state.api_token = api_token

    def service() -> ServiceState:
        return app.state.auth

    def require_token(x_api_token: str | None = Header(default=None)) -> None:
        if x_api_token != app.state.api_token:
            raise PermissionError("missing or invalid API token")

    @app.exception_handler(ContauthError)
    async def contauth_error(request: Request, exc: ContauthError):
        status = _STATUS.get(type(exc), 400)
        code = _CODE.get(type(exc), "error")
        detail = getattr(exc, "field", None)
        body = ErrorBody(code=code, message=str(exc), detail=detail)
        return JSONResponse(status_code=status, content=body.model_dump())

    @app.exception_handler(PermissionError)
    async def permission_error(request: Request, exc: PermissionError):
        body = ErrorBody(code="unauthorized", message=str(exc))
        return JSONResponse(status_code=401, content=body.model_dump())

    @app.exception_handler(RequestValidationError)
    async def malformed(request: Request, exc: RequestValidationError):
        body = ErrorBody(code="malformed_request", message="request body failed validation",
                         detail=str(exc.errors()[:3]))
        return JSONResponse(status_code=422, content=body.model_dump())

    @app.post("/v1/vectors", response_model=IngestAck, dependencies=[Depends(require_token)])
    def ingest(envelope: IngestEnvelope):
        seq, version = service().ingest(
            envelope.user_id,
            envelope.device_id,
            envelope.device_kind,
            envelope.minute_index,
            envelope.schema_id,
            envelope.features,
        )
        return IngestAck(sequence_number=seq, schema_id=envelope.schema_id, config_version=version)

    @app.get("/v1/scores/{user_id}/{minute_index}", response_model=ScoreResponse)
    def score(user_id: str, minute_index: int, tier: str = "standard", notify: bool = True):
        st = service()
        auth_score = st.score_minute(user_id, minute_index)
        decision = st.decide(auth_score, tier)
        if notify:
            for device in st.user_devices(user_id):
                device_rule = st.decide_for_tier(auth_score, device.tier)
                app.state.notifier.notify(device, device_rule)
        return ScoreResponse(
            user_id=user_id,
            minute_index=minute_index,
            model_scores=auth_score.model_scores,
            aggregate=auth_score.aggregate,
            contributing_models=auth_score.contributing_models,
            config_version=auth_score.config_version,
            decision=DecisionBody(
                action=decision.action, rule_id=decision.rule_id, aggregate=decision.aggregate
            ),
        )

    @app.post("/v1/config", response_model=ConfigResponse)
    def configure(req: ConfigRequest):
        st = service()
        config = build_config(req, st.next_version(), st.config)
        version = st.configure(config)
        return ConfigResponse(
            config_version=version,
            window_s=config.window_s,
            models=[m.name for m in config.models],
            tiers=list(config.tiers),
            schemas=sorted(config.schemas),
        )

    @app.post("/v1/devices")
    def register_device(reg: DeviceRegistration):
        service().register_device(DeviceInfo(reg.device_id, reg.user_id, reg.callback_url, reg.tier))
        return {"registered": reg.device_id, "config_version": service().config.version}

    @app.get("/v1/schemas")
    def list_schemas():
        config = service().config
        return {
            "config_version": config.version,
            "schemas": [
                {
                    "schema_id": s.schema_id,
                    "device_kind": s.device_kind,
                    "blocks": list(s.blocks),
                    "feature_names": list(s.feature_names),
                    "categorical_categories": s.categories,
                }
                for s in config.schemas.values()
            ],
        }

    @app.get("/v1/decisions/{user_id}", response_model=list[DecisionLogEntry])
    def decisions(user_id: str):
        return [
            DecisionLogEntry(
                user_id=rec.user_id,
                minute_index=rec.minute_index,
                aggregate=rec.aggregate,
                action=rec.action,
                rule_id=rec.rule_id,
                tier=rec.tier,
                config_version=rec.config_version,
                model_scores=rec.model_scores,
            )
            for rec in service().user_decisions(user_id)
        ]

    return app
