from .schema import (
    MOBILE_APP_CATEGORICAL,
    MOBILE_NAMES,
    MOBILE_SCHEMA_ID,
    PC_CATEGORICAL,
    PC_DENSE_NAMES,
    PC_SCHEMA_ID,
    MinuteFeatureVector,
    app_resource_feature_names,
    is_digraph_name,
    keyboard_feature_names,
    mobile_app_feature_names,
    mouse_feature_names,
    sensor_feature_names,
)
from .windows import MinuteWindow, infer_device_kinds, windowize
from .keyboard import extract_keyboard_features
from .mouse import extract_mouse_features
from .apps import extract_app_resource_features
from .mobile import DayContext, extract_mobile_app_features, extract_sensor_features
from .extract import extract_minute_vector, extract_stream
from .csv_io import feature_columns, read_feature_csv, write_feature_csv

__all__ = [
    "MOBILE_APP_CATEGORICAL",
    "MOBILE_NAMES",
    "MOBILE_SCHEMA_ID",
    "PC_CATEGORICAL",
    "PC_DENSE_NAMES",
    "PC_SCHEMA_ID",
    "MinuteFeatureVector",
    "app_resource_feature_names",
    "is_digraph_name",
    "keyboard_feature_names",
    "mobile_app_feature_names",
    "mouse_feature_names",
    "sensor_feature_names",
    "MinuteWindow",
    "infer_device_kinds",
    "windowize",
    "extract_keyboard_features",
    "extract_mouse_features",
    "extract_app_resource_features",
    "DayContext",
    "extract_mobile_app_features",
    "extract_sensor_features",
    "extract_minute_vector",
    "extract_stream",
    "feature_columns",
    "read_feature_csv",
    "write_feature_csv",
]
