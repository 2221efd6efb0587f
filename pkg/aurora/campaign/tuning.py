"""Quasi-static spread sweep used to fix the default noise profile."""

from __future__ import annotations

import dataclasses
import logging
from collections.abc import Sequence
from dataclasses import dataclass

from aurora.campaign.config import CampaignConfig
from aurora.campaign.runner import run_campaign
from aurora.errors import InvalidArgumentError
from aurora.physics.emulator import Backend
from aurora.physics.schedule import MitigationCondition

logger = logging.getLogger(__name__)

REDUCTION_BAND = (68.0, 97.0)
DEFAULT_SIGMAS = (0.02, 0.05, 0.1, 0.2, 0.4)
TUNING_RESAMPLES = 100


@dataclass(frozen=True)
class TuningRow:
    sigma_qs: float
    reductions: tuple[tuple[float, float], ...]  # (phi, AuroraDD MSE reduction %)

    @property
    def in_band(self) -> bool:
        lo, hi = REDUCTION_BAND
        return all(lo <= r <= hi for _, r in self.reductions)

    def to_dict(self) -> dict:
        return {
            "sigma_qs_rad_per_us": self.sigma_qs,
            "reductions": [{"phi": phi, "mse_reduction_pct": r} for phi, r in self.reductions],
            "in_band": self.in_band,
        }


def tune_sigma(
    config: CampaignConfig,
    sigmas: Sequence[float] = DEFAULT_SIGMAS,
    backend: Backend | None = None,
) -> list[TuningRow]:
    """Run a Baseline/AuroraDD campaign per candidate spread and report the reductions."""
    if not sigmas:
        raise InvalidArgumentError("at least one candidate sigma is required")
    rows = []
    for sigma in sigmas:
        trial_config = dataclasses.replace(
            config,
            sigma_qs_rad_per_us=float(sigma),
            conditions=(MitigationCondition.BASELINE, MitigationCondition.AURORA_DD),
            bootstrap_resamples=TUNING_RESAMPLES,
        )
        rs = run_campaign(trial_config, backend=backend)
        reductions = tuple(
            (s.phi, s.reduction_mse_pct)
            for s in rs.summaries
            if s.condition == MitigationCondition.AURORA_DD.value
            and s.reduction_mse_pct is not None
        )
        row = TuningRow(float(sigma), reductions)
        logger.info("sigma_qs=%.3f in_band=%s", sigma, row.in_band)
        rows.append(row)
    return rows
