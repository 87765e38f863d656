from .clustering import best_cluster_label_map, paired_fscore, tagging_f1, v_measure
from .outliers import (
    GroupError,
    OutlierGroup,
    compactness,
    detect_outlier,
    evaluate_outlier_dataset,
    load_outlier_dataset,
    opp_and_accuracy,
    resolve_prototypes,
)
from .wic import (
    DEFAULT_THRESHOLD,
    WicInstance,
    load_wic,
    wic_classify,
    wic_evaluate,
    wic_similarity,
    wic_tune_threshold,
)

__all__ = [
    "best_cluster_label_map",
    "paired_fscore",
    "tagging_f1",
    "v_measure",
    "GroupError",
    "OutlierGroup",
    "compactness",
    "detect_outlier",
    "evaluate_outlier_dataset",
    "load_outlier_dataset",
    "opp_and_accuracy",
    "resolve_prototypes",
    "DEFAULT_THRESHOLD",
    "WicInstance",
    "load_wic",
    "wic_classify",
    "wic_evaluate",
    "wic_similarity",
    "wic_tune_threshold",
]
