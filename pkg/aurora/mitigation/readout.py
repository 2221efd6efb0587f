"""Readout mitigation by exact inversion of the 2x2 confusion matrix.

For a single qubit the full M3 subspace machinery reduces to this inversion.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from aurora.errors import InvalidArgumentError
from aurora.physics.emulator import Confusion, ShotCounts

SINGULAR_TOL = 1e-12


@dataclass(frozen=True)
class MitigatedProbabilities:
    p0: float
    p1: float
    clamped: bool = False

    @property
    def z(self) -> float:
        return self.p0 - self.p1


def _mitigate(p_obs: np.ndarray, readout: Confusion) -> MitigatedProbabilities:
    # rows are p(read j | true i), so observed = true @ C
    conf = np.asarray(readout, dtype=float)
    if abs(np.linalg.det(conf)) < SINGULAR_TOL:
        raise InvalidArgumentError(f"readout confusion matrix is singular: {readout}")
    p_true = np.linalg.solve(conf.T, p_obs)

    clamped = bool(np.any(p_true < 0.0) or np.any(p_true > 1.0))
    if clamped:
        p_true = np.clip(p_true, 0.0, 1.0)
        p_true = p_true / p_true.sum()
    return MitigatedProbabilities(float(p_true[0]), float(p_true[1]), clamped)


def readout_mitigate(counts: ShotCounts, readout: Confusion) -> MitigatedProbabilities:
    """Correct observed outcome frequencies for readout flips.

    Corrected values outside [0, 1] are clamped and renormalized, and the
    result carries ``clamped=True``.
    """
    return _mitigate(np.array(counts.probabilities(), dtype=float), readout)


def mitigate_probabilities(p0: float, p1: float, readout: Confusion) -> MitigatedProbabilities:
    return _mitigate(np.array([p0, p1], dtype=float), readout)
