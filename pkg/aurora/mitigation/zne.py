"""Zero-noise extrapolation with a linear fit in the noise scale.

The extrapolated value is reported unclipped; ``out_of_range`` marks fits
whose intercept leaves the physical interval [-1, 1].
"""

from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import dataclass, replace

import numpy as np

from aurora.errors import InvalidArgumentError

DEFAULT_LAMBDAS = (1.0, 1.05)


@dataclass(frozen=True)
class ZnePoint:
    lam: float
    z: float

    def __post_init__(self):
        if not (math.isfinite(self.lam) and self.lam > 0):
            raise InvalidArgumentError(f"noise scale must be > 0, got {self.lam}")
        if not math.isfinite(self.z):
            raise InvalidArgumentError(f"z must be finite, got {self.z}")


@dataclass(frozen=True)
class ZneFit:
    a: float
    b: float
    residual: float = 0.0

    @property
    def z0(self) -> float:
        return self.a

    @property
    def out_of_range(self) -> bool:
        return abs(self.a) > 1.0

    def predict(self, lam: float) -> float:
        return self.a + self.b * lam


def zne_extrapolate(points: Sequence[ZnePoint]) -> ZneFit:
    """Fit ``z(lam) = a + b*lam`` (least squares beyond two points) and return the intercept."""
    if len({p.lam for p in points}) < 2:
        raise InvalidArgumentError(
            f"zero-noise extrapolation needs >= 2 distinct noise scales, got {len(points)} points"
        )
    # fit is independent of input order
    ordered = sorted(points, key=lambda p: (p.lam, p.z))
    lam = np.array([p.lam for p in ordered])
    z = np.array([p.z for p in ordered])

    b, a = np.polyfit(lam, z, 1)
    fit = ZneFit(a=float(a), b=float(b))
    residual = float(np.sqrt(np.mean([(fit.predict(p.lam) - p.z) ** 2 for p in ordered])))
    return replace(fit, residual=residual)
