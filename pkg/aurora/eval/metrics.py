"""Per-trial error metrics and group summaries."""

from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np

from aurora.errors import InvalidArgumentError

STD_CONVENTION = "sample (n-1 denominator); 0 with std_applicable=false when n=1"


def absolute_error(measured: float, ideal: float) -> float:
    return abs(measured - ideal)


def mse(measured: float, ideal: float) -> float:
    return (measured - ideal) ** 2


@dataclass(frozen=True)
class MetricSummary:
    """Mean and sample standard deviation of a group of per-trial values."""

    mean: float
    std: float
    n: int
    std_applicable: bool = True

    def to_dict(self) -> dict:
        return {
            "mean": self.mean,
            "std": self.std,
            "n": self.n,
            "std_applicable": self.std_applicable,
        }

    @classmethod
    def from_dict(cls, d: dict) -> MetricSummary:
        return cls(float(d["mean"]), float(d["std"]), int(d["n"]), bool(d["std_applicable"]))


def summarize(values: Sequence[float]) -> MetricSummary:
    arr = np.asarray(values, dtype=float)
    if arr.size == 0:
        raise InvalidArgumentError("cannot summarize an empty sequence")
    if arr.size == 1:
        return MetricSummary(float(arr[0]), 0.0, 1, std_applicable=False)
    return MetricSummary(float(arr.mean()), float(arr.std(ddof=1)), int(arr.size))


def improvement(baseline: float, method: float) -> float:
    """Percent reduction of ``method`` relative to ``baseline``: 100 * (1 - method/baseline)."""
    if not (math.isfinite(baseline) and baseline > 0):
        raise InvalidArgumentError(f"baseline must be > 0, got {baseline}")
    return 100.0 * (1.0 - method / baseline)
