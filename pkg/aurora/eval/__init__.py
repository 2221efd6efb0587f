"""Metrics, small-sample inference and baseline comparison."""

from aurora.eval.baseline_comparison import GroupSummary, compare_to_baseline
from aurora.eval.inference import (
    IntervalEstimate,
    PairedTTest,
    bootstrap_ci,
    paired_t_test,
    sign_test,
)
from aurora.eval.metrics import MetricSummary, absolute_error, improvement, mse, summarize

__all__ = [
    "GroupSummary",
    "compare_to_baseline",
    "IntervalEstimate",
    "PairedTTest",
    "bootstrap_ci",
    "paired_t_test",
    "sign_test",
    "MetricSummary",
    "absolute_error",
    "improvement",
    "mse",
    "summarize",
]
