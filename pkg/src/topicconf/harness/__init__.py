"""Evaluation scenarios, error decomposition, grid search and statistics."""

from topicconf.harness.metrics import (
    ErrorBreakdown,
    EvalReport,
    MetricSummary,
    accuracy,
    aggregate,
    balanced_accuracy,
    decompose_errors,
    evaluate,
    exact_percentages,
    random_chance,
)
from topicconf.harness.pipeline import (
    PRESETS,
    GridResult,
    GridSpec,
    PipelineError,
    PipelineSpec,
    SplitData,
    get_pipeline,
    grid_search,
    run_experiment,
)
from topicconf.harness.splits import (
    ConfusionConfig,
    ScenarioSplit,
    SplitError,
    build_confusion_split,
    build_cross_topic_splits,
    build_same_topic_split,
    make_confusion_config,
)
from topicconf.harness.stats import WelchResult, moment_matched_sample, welch_ttest

__all__ = [
    "PRESETS",
    "ConfusionConfig",
    "ErrorBreakdown",
    "EvalReport",
    "GridResult",
    "GridSpec",
    "MetricSummary",
    "PipelineError",
    "PipelineSpec",
    "ScenarioSplit",
    "SplitData",
    "SplitError",
    "WelchResult",
    "accuracy",
    "aggregate",
    "balanced_accuracy",
    "build_confusion_split",
    "build_cross_topic_splits",
    "build_same_topic_split",
    "decompose_errors",
    "evaluate",
    "exact_percentages",
    "get_pipeline",
    "grid_search",
    "make_confusion_config",
    "moment_matched_sample",
    "random_chance",
    "run_experiment",
    "welch_ttest",
]
