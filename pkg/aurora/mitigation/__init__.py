"""Error mitigation: linear zero-noise extrapolation and readout inversion."""

from aurora.mitigation.readout import (
    MitigatedProbabilities,
    mitigate_probabilities,
    readout_mitigate,
)
from aurora.mitigation.zne import DEFAULT_LAMBDAS, ZneFit, ZnePoint, zne_extrapolate

__all__ = [
    "MitigatedProbabilities",
    "mitigate_probabilities",
    "readout_mitigate",
    "DEFAULT_LAMBDAS",
    "ZneFit",
    "ZnePoint",
    "zne_extrapolate",
]
