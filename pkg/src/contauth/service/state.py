"""Server-side state: envelope buffers, versioned configuration, scoring.

Configuration swaps are atomic reference replacements; every scoring request
works against exactly one captured configuration snapshot.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field

import numpy as np

from ..errors import ConfigurationError, NotFoundError, SchemaError, ValidationError
from ..models.base import TrainedModel
from ..models.lstm import LstmModel
from ..pipeline.fusion import FUSED_WIDTH, MOBILE_APP_BLOCK, PC_BLOCK, SENSOR_BLOCK
from ..pipeline.sequences import FILL_VALUE
from .policy import PolicyRule, apply_policy, validate_rules

BLOCK_WIDTHS = {"pc": PC_BLOCK, "mapp": MOBILE_APP_BLOCK, "sens": SENSOR_BLOCK}
BLOCK_OFFSETS = {"pc": 0, "mapp": PC_BLOCK, "sens": PC_BLOCK + MOBILE_APP_BLOCK}

_WEIGHT_TOL = 1e-9


@dataclass(frozen=True)
class SchemaDef:
    schema_id: str
    device_kind: str
    blocks: tuple[str, ...]
    feature_names: tuple[str, ...]
    # one-hot category codes per source column, so clients can rebuild
    # encoded features (including the unknown bucket) from raw vectors
    categorical_categories: tuple[tuple[str, tuple[int, ...]], ...] = ()

    @property
    def width(self) -> int:
        return sum(BLOCK_WIDTHS[b] for b in self.blocks)

    @property
    def categories(self) -> dict[str, list[int]]:
        return {col: list(codes) for col, codes in self.categorical_categories}

    def __post_init__(self):
        for b in self.blocks:
            if b not in BLOCK_WIDTHS:
                raise ValidationError(f"unknown block {b!r}", field="blocks")
        if len(self.feature_names) != self.width:
            raise ValidationError(
                f"schema {self.schema_id} names {len(self.feature_names)} features "
                f"but its blocks need {self.width}",
                field="feature_names",
            )


@dataclass(frozen=True)
class ScoringModel:
    name: str
    model: TrainedModel
    weight: float
    sequence_length: int | None = None  # set for LSTM models

    @property
    def is_sequence(self) -> bool:
        return isinstance(self.model, LstmModel)


@dataclass(frozen=True)
class ServiceConfig:
    version: int
    window_s: float
    models: tuple[ScoringModel, ...]
    rules: tuple[PolicyRule, ...]
    tiers: tuple[str, ...]
    schemas: dict[str, SchemaDef]

    def validate(self) -> None:
        names = [m.name for m in self.models]
        if len(set(names)) != len(names):
            raise ConfigurationError("duplicate model names")
        if self.models:
            total = sum(m.weight for m in self.models)
            if any(m.weight < 0 for m in self.models):
                raise ConfigurationError("model weights must be >= 0")
            if abs(total - 1.0) > _WEIGHT_TOL:
                raise ConfigurationError(f"model weights sum to {total!r}, expected 1")
        validate_rules(list(self.rules), list(self.tiers))
        for m in self.models:
            if m.is_sequence and not m.sequence_length:
                raise ConfigurationError(f"sequence model {m.name} needs sequence_length")


@dataclass
class BufferedVector:
    sequence_number: int
    device_id: str
    schema: SchemaDef
    values: np.ndarray


@dataclass
class DeviceInfo:
    device_id: str
    user_id: str
    callback_url: str
    tier: str


@dataclass
class DecisionRecord:
    user_id: str
    minute_index: int
    aggregate: float
    action: str
    rule_id: str
    tier: str
    config_version: int
    model_scores: dict[str, float]


@dataclass
class AuthScore:
    user_id: str
    minute_index: int
    model_scores: dict[str, float]
    aggregate: float
    contributing_models: list[str]
    config_version: int


class ServiceState:
    """All mutable server state; safe under concurrent ingest/score/configure."""

    def __init__(self, config: ServiceConfig):
        config.validate()
        self._config = config
        self._lock = threading.Lock()
        self._seq = 0
        # (user, minute) -> device_id -> BufferedVector
        self.buffers: dict[tuple[str, int], dict[str, BufferedVector]] = {}
        self.devices: dict[str, DeviceInfo] = {}
        self.decisions: dict[tuple[str, int], DecisionRecord] = {}

    @property
    def config(self) -> ServiceConfig:
        return self._config

    def configure(self, config: ServiceConfig) -> int:
        config.validate()
        with self._lock:
            self._config = config
        return config.version

    def next_version(self) -> int:
        return self._config.version + 1

    # -- ingestion ---------------------------------------------------------

    def ingest(self, user_id: str, device_id: str, device_kind: str,
               minute_index: int, schema_id: str, features: list[float]) -> tuple[int, int]:
        config = self._config
        schema = config.schemas.get(schema_id)
        if schema is None:
            raise SchemaError(
                f"unknown schema {schema_id!r}; known schemas: {sorted(config.schemas)}"
            )
        if device_kind != schema.device_kind:
            raise ValidationError(
                f"schema {schema_id} is for {schema.device_kind} devices, not {device_kind}",
                field="device_kind",
            )
        if len(features) != schema.width:
            raise ValidationError(
                f"schema {schema_id} expects {schema.width} values, got {len(features)}",
                field="features",
            )
        values = np.asarray(features, dtype=np.float64)
        if not np.isfinite(values).all():
            raise ValidationError("features must be finite", field="features")
        with self._lock:
            self._seq += 1
            seq = self._seq
            per_device = self.buffers.setdefault((user_id, minute_index), {})
            per_device[device_id] = BufferedVector(seq, device_id, schema, values)
        return seq, config.version

    # -- fusion and scoring ------------------------------------------------

    def fused_for_minute(self, user_id: str, minute_index: int) -> np.ndarray | None:
        per_device = self.buffers.get((user_id, minute_index))
        if not per_device:
            return None
        fused = np.zeros(FUSED_WIDTH)
        # deterministic block fill by device id, independent of arrival order;
        # per-device replacement already keeps only the latest submission
        for _, buffered in sorted(per_device.items()):
            offset = 0
            for block in buffered.schema.blocks:
                width = BLOCK_WIDTHS[block]
                fused[BLOCK_OFFSETS[block] : BLOCK_OFFSETS[block] + width] = (
                    buffered.values[offset : offset + width]
                )
                offset += width
        return fused

    def user_minutes(self, user_id: str) -> list[int]:
        return sorted(m for (u, m) in self.buffers if u == user_id)

    def _trailing_window(self, user_id: str, minute_index: int, T: int) -> np.ndarray | None:
        minutes = self.user_minutes(user_id)
        if not minutes or minute_index - minutes[0] + 1 < T:
            return None
        window = np.full((T, FUSED_WIDTH), FILL_VALUE)
        for t in range(T):
            fused = self.fused_for_minute(user_id, minute_index - T + 1 + t)
            if fused is not None:
                window[t] = fused
        return window

    def score_minute(self, user_id: str, minute_index: int) -> AuthScore:
        config = self._config
        fused = self.fused_for_minute(user_id, minute_index)
        if fused is None:
            raise NotFoundError(
                f"no data buffered for user {user_id!r} minute {minute_index}"
            )
        model_scores: dict[str, float] = {}
        contributing: list[str] = []
        weights: list[float] = []
        for sm in config.models:
            if sm.is_sequence:
                window = self._trailing_window(user_id, minute_index, sm.sequence_length)
                if window is None:
                    continue
                scores = sm.model.predict_scores(window)[0]
            else:
                expected = len(sm.model.feature_names or [])
                if expected != FUSED_WIDTH:
                    raise SchemaError(
                        f"model {sm.name} expects {expected} features, fused width is "
                        f"{FUSED_WIDTH}; stale model deployment"
                    )
                scores = sm.model.predict_scores(fused)[0]
            try:
                idx = sm.model.classes.index(user_id)
                score = float(scores[idx])
            except ValueError:
                score = 0.0
            model_scores[sm.name] = score
            contributing.append(sm.name)
            weights.append(sm.weight)

        if not contributing:
            raise ConfigurationError("no models configured to score this request")
        w = np.asarray(weights)
        if w.sum() <= 0:
            w = np.ones_like(w)
        aggregate = float(np.dot(w, [model_scores[n] for n in contributing]) / w.sum())
        return AuthScore(user_id, minute_index, model_scores, aggregate, contributing, config.version)

    def decide_for_tier(self, score: AuthScore, tier: str) -> DecisionRecord:
        """Policy outcome for one tier; does not touch the decision log."""
        rule = apply_policy(score.aggregate, tier, list(self._config.rules))
        return DecisionRecord(
            user_id=score.user_id,
            minute_index=score.minute_index,
            aggregate=score.aggregate,
            action=rule.action,
            rule_id=rule.rule_id,
            tier=tier,
            config_version=score.config_version,
            model_scores=dict(score.model_scores),
        )

    def decide(self, score: AuthScore, tier: str) -> DecisionRecord:
        """Apply policy and record the decision, one log entry per (user, minute)."""
        record = self.decide_for_tier(score, tier)
        with self._lock:
            self.decisions[(score.user_id, score.minute_index)] = record
        return record

    def register_device(self, info: DeviceInfo) -> None:
        with self._lock:
            self.devices[info.device_id] = info

    def user_devices(self, user_id: str) -> list[DeviceInfo]:
        return [d for d in self.devices.values() if d.user_id == user_id]

    def user_decisions(self, user_id: str) -> list[DecisionRecord]:
        return [rec for (u, _), rec in sorted(self.decisions.items()) if u == user_id]
