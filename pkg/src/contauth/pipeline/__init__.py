from .dataset import LabeledDataset
from .preprocess import (
    OneHotEncoder,
    drop_constant_features,
    importance_select,
    one_hot_encode,
    project_features,
)
from .split import SplitResult, assert_no_leakage, segment_split
from .fusion import (
    FUSED_WIDTH,
    MOBILE_APP_BLOCK,
    PC_BLOCK,
    SENSOR_BLOCK,
    FusedVector,
    fuse_minute_vectors,
    fuse_timeline,
    fused_dataset,
    fused_feature_names,
)
from .usage import (
    SUPPORTED_WINDOWS,
    USAGE_FEATURE_NAMES,
    DerivedUsageVector,
    activity_map,
    derive_usage_features,
    usage_dataset,
    usage_window_features,
)
from .sequences import (
    FILL_VALUE,
    SUPPORTED_SEQUENCE_LENGTHS,
    SequenceDataset,
    SequenceWindow,
    UserTimeline,
    build_sequences,
    concat_sequences,
)
from .datasets import active_minutes, mobile_app_dataset, pc_dataset, sensor_dataset

__all__ = [
    "LabeledDataset",
    "OneHotEncoder",
    "drop_constant_features",
    "importance_select",
    "one_hot_encode",
    "project_features",
    "SplitResult",
    "assert_no_leakage",
    "segment_split",
    "FUSED_WIDTH",
    "MOBILE_APP_BLOCK",
    "PC_BLOCK",
    "SENSOR_BLOCK",
    "FusedVector",
    "fuse_minute_vectors",
    "fuse_timeline",
    "fused_dataset",
    "fused_feature_names",
    "SUPPORTED_WINDOWS",
    "USAGE_FEATURE_NAMES",
    "DerivedUsageVector",
    "activity_map",
    "derive_usage_features",
    "usage_dataset",
    "usage_window_features",
    "FILL_VALUE",
    "SUPPORTED_SEQUENCE_LENGTHS",
    "SequenceDataset",
    "SequenceWindow",
    "UserTimeline",
    "build_sequences",
    "concat_sequences",
    "active_minutes",
    "mobile_app_dataset",
    "pc_dataset",
    "sensor_dataset",
]
