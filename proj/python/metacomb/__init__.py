"""Stacked-ensemble toolkit: probability combination, threshold training,
evaluation metrics, and combiner weight-sum bound checks."""

from metacomb._core import (
    BoundInterval,
    ClassMetrics,
    ClassNorms,
    CombinerParams,
    ConfusionCounts,
    DataError,
    DegenerateClassError,
    DimensionError,
    GridSpec,
    ParameterError,
    SignCase,
    SingularityError,
    ThresholdSearchResult,
    TrainingConfig,
    assign_class,
    biased_sigmoid,
    bound_interval,
    brute_force_threshold_oracle,
    class_diff_norm,
    class_norm,
    combine_scores,
    combiner_loss,
    confusion,
    f1_from_counts,
    interpolation_scores,
    macro_f1,
    predict_scores,
    sigmoid,
    train_class_combiner,
    train_threshold,
)

__all__ = [
    "BoundInterval",
    "ClassMetrics",
    "ClassNorms",
    "CombinerParams",
    "ConfusionCounts",
    "DataError",
    "DegenerateClassError",
    "DimensionError",
    "GridSpec",
    "ParameterError",
    "SignCase",
    "SingularityError",
    "ThresholdSearchResult",
    "TrainingConfig",
    "assign_class",
    "biased_sigmoid",
    "bound_interval",
    "brute_force_threshold_oracle",
    "class_diff_norm",
    "class_norm",
    "combine_scores",
    "combiner_loss",
    "confusion",
    "f1_from_counts",
    "interpolation_scores",
    "macro_f1",
    "predict_scores",
    "sigmoid",
    "train_class_combiner",
    "train_threshold",
]
