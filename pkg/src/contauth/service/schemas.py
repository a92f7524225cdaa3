"""Pydantic request/response models for the scoring service."""

from __future__ import annotations

from pydantic import BaseModel, Field


class IngestEnvelope(BaseModel):
    user_id: str
    device_id: str
    device_kind: str
    minute_index: int = Field(ge=0)
    schema_id: str
    features: list[float]


class IngestAck(BaseModel):
    sequence_number: int
    schema_id: str
    config_version: int


class RuleBody(BaseModel):
    rule_id: str
    tier: str = "*"
    min_score: float = 0.0
    max_score: float = 1.0
    min_inclusive: bool = True
    max_inclusive: bool = True
    action: str
    priority: int


class ModelRef(BaseModel):
    name: str
    path: str
    weight: float = Field(ge=0.0)
    sequence_length: int | None = None  # LSTM trailing-window length


class SchemaBody(BaseModel):
    schema_id: str
    device_kind: str
    blocks: list[str]  # in {"pc", "mapp", "sens"}
    feature_names: list[str]
    categorical_categories: dict[str, list[int]] = {}


class ConfigRequest(BaseModel):
    window_s: float = 60.0
    models: list[ModelRef] | None = None
    weights: dict[str, float] | None = None  # overrides ModelRef weights when given
    rules: list[RuleBody]
    tiers: list[str] = ["standard"]
    schemas: list[SchemaBody] | None = None


class ConfigResponse(BaseModel):
    config_version: int
    window_s: float
    models: list[str]
    tiers: list[str]
    schemas: list[str]


class DeviceRegistration(BaseModel):
    device_id: str
    user_id: str
    callback_url: str
    tier: str = "standard"


class DecisionBody(BaseModel):
    action: str
    rule_id: str
    aggregate: float


class ScoreResponse(BaseModel):
    user_id: str
    minute_index: int
    model_scores: dict[str, float]
    aggregate: float
    contributing_models: list[str]
    config_version: int
    decision: DecisionBody


class DecisionLogEntry(BaseModel):
    user_id: str
    minute_index: int
    aggregate: float
    action: str
    rule_id: str
    tier: str
    config_version: int
    model_scores: dict[str, float]


class ErrorBody(BaseModel):
    code: str
    message: str
    detail: str | None = None
