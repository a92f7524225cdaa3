from .policy import ACTIONS, PolicyRule, apply_policy, default_rules, validate_rules
from .state import (
    AuthScore,
    DecisionRecord,
    DeviceInfo,
    SchemaDef,
    ScoringModel,
    ServiceConfig,
    ServiceState,
)
from .notify import DeliveryRecord, DeviceNotifier
from .app import DEFAULT_TOKEN, build_config, create_app, empty_config
from . import schemas

__all__ = [
    "ACTIONS",
    "PolicyRule",
    "apply_policy",
    "default_rules",
    "validate_rules",
    "AuthScore",
    "DecisionRecord",
    "DeviceInfo",
    "SchemaDef",
    "ScoringModel",
    "ServiceConfig",
    "ServiceState",
    "DeliveryRecord",
    "DeviceNotifier",
    "DEFAULT_TOKEN",
    "build_config",
    "create_app",
    "empty_config",
    "schemas",
]
