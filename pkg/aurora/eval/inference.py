"""Small-sample inference: percentile bootstrap, one-sided sign test, paired t-test."""

from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy import stats

from aurora.errors import InvalidArgumentError

DEFAULT_RESAMPLES = 10_000
DEFAULT_LEVEL = 0.95
BOOTSTRAP_CHUNK = 2_000


@dataclass(frozen=True)
class IntervalEstimate:
    lo: float
    hi: float
    level: float
    resamples: int

    @property
    def width(self) -> float:
        return self.hi - self.lo

    def to_dict(self) -> dict:
        return {"lo": self.lo, "hi": self.hi, "level": self.level, "resamples": self.resamples}

    @classmethod
    def from_dict(cls, d: dict) -> IntervalEstimate:
        return cls(float(d["lo"]), float(d["hi"]), float(d["level"]), int(d["resamples"]))


@dataclass(frozen=True)
class PairedTTest:
    t: float | None
    p: float | None
    df: int
    degenerate: bool = False

    def to_dict(self) -> dict:
        return {"t": self.t, "p": self.p, "df": self.df, "degenerate": self.degenerate}

    @classmethod
    def from_dict(cls, d: dict) -> PairedTTest:
        return cls(d["t"], d["p"], int(d["df"]), bool(d["degenerate"]))


def bootstrap_ci(
    values: Sequence[float],
    resamples: int = DEFAULT_RESAMPLES,
    level: float = DEFAULT_LEVEL,
    seed: int = 0,
) -> IntervalEstimate:
    """Percentile-bootstrap interval for the mean.

    Resamples are drawn in fixed-size chunks, each from its own child of
    ``seed``; chunks are merged in order, so the result does not depend on how
    the work is split.
    """
    arr = np.asarray(values, dtype=float)
    if arr.size < 2:
        raise InvalidArgumentError(f"bootstrap needs n >= 2 values, got {arr.size}")
    if resamples < 100:
        raise InvalidArgumentError(f"resamples must be >= 100, got {resamples}")
    if not 0 < level < 1:
        raise InvalidArgumentError(f"level must lie in (0, 1), got {level}")
    if np.all(arr == arr[0]):
        c = float(arr[0])
        return IntervalEstimate(lo=c, hi=c, level=level, resamples=resamples)

    n_chunks = math.ceil(resamples / BOOTSTRAP_CHUNK)
    children = np.random.SeedSequence(seed).spawn(n_chunks)
    means = []
    remaining = resamples
    for child in children:
        size = min(BOOTSTRAP_CHUNK, remaining)
        idx = np.random.default_rng(child).integers(0, arr.size, size=(size, arr.size))
        means.append(arr[idx].mean(axis=1))
        remaining -= size
    means = np.concatenate(means)

    alpha = (1.0 - level) / 2.0
    lo, hi = np.quantile(means, [alpha, 1.0 - alpha])
    # clamp to the sample range; quantile interpolation can drift by an ulp
    lo = max(float(lo), float(arr.min()))
    hi = min(float(hi), float(arr.max()))
    return IntervalEstimate(lo=lo, hi=max(lo, hi), level=level, resamples=resamples)


def sign_test(wins: int, n: int) -> float:
    """One-sided binomial tail P(X >= wins) for X ~ Binomial(n, 1/2), computed exactly."""
    if n < 0 or wins < 0:
        raise InvalidArgumentError(f"wins and n must be >= 0, got wins={wins}, n={n}")
    if wins > n:
        raise InvalidArgumentError(f"wins ({wins}) cannot exceed n ({n})")
    tail = sum(math.comb(n, k) for k in range(wins, n + 1))
    return float(Fraction(tail, 2**n))


def paired_t_test(a: Sequence[float], b: Sequence[float]) -> PairedTTest:
    """Paired t-test on ``a - b`` with n-1 degrees of freedom, two-sided p-value."""
    x = np.asarray(a, dtype=float)
    y = np.asarray(b, dtype=float)
    if x.shape != y.shape:
        raise InvalidArgumentError(f"paired samples differ in length: {x.size} vs {y.size}")
    if x.size < 2:
        raise InvalidArgumentError(f"paired t-test needs n >= 2 pairs, got {x.size}")

    diff = x - y
    df = int(x.size - 1)
    if np.all(diff == diff[0]):
        return PairedTTest(t=None, p=None, df=df, degenerate=True)
    result = stats.ttest_rel(x, y)
    return PairedTTest(t=float(result.statistic), p=float(result.pvalue), df=df)
