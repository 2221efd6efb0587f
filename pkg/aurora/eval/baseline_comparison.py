"""Compare every mitigation condition against the Baseline at each phase.

Works on a records table (one row per trial) so that the campaign runner and
the ``stats`` command, which reloads ``records.csv``, share one code path.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import pandas as pd

from aurora.eval.inference import (
    DEFAULT_LEVEL,
    DEFAULT_RESAMPLES,
    IntervalEstimate,
    PairedTTest,
    bootstrap_ci,
    paired_t_test,
    sign_test,
)
from aurora.eval.metrics import MetricSummary, improvement, summarize
from aurora.seeds import derive_seed

logger = logging.getLogger(__name__)

BASELINE = "Baseline"
REDUCTION_FORMULA = (
    "100 * (1 - mean_method / mean_baseline), from group means over non-preliminary trials"
)


@dataclass(frozen=True)
class GroupSummary:
    """Statistics for one (phi, condition) group."""

    phi: float
    condition: str
    ae: MetricSummary
    mse: MetricSummary
    reduction_ae_pct: float | None = None
    reduction_mse_pct: float | None = None
    ci: IntervalEstimate | None = None
    wins: int | None = None
    sign_p: float | None = None
    t_test: PairedTTest | None = None

    @property
    def is_method(self) -> bool:
        return self.condition != BASELINE

    def to_dict(self) -> dict:
        return {
            "phi": self.phi,
            "condition": self.condition,
            "ae": self.ae.to_dict(),
            "mse": self.mse.to_dict(),
            "reduction_ae_pct": self.reduction_ae_pct,
            "reduction_mse_pct": self.reduction_mse_pct,
            "ci": self.ci.to_dict() if self.ci else None,
            "wins": self.wins,
            "sign_p": self.sign_p,
            "t_test": self.t_test.to_dict() if self.t_test else None,
        }

    @classmethod
    def from_dict(cls, d: dict) -> GroupSummary:
        return cls(
            phi=float(d["phi"]),
            condition=d["condition"],
            ae=MetricSummary.from_dict(d["ae"]),
            mse=MetricSummary.from_dict(d["mse"]),
            reduction_ae_pct=d["reduction_ae_pct"],
            reduction_mse_pct=d["reduction_mse_pct"],
            ci=IntervalEstimate.from_dict(d["ci"]) if d["ci"] else None,
            wins=d["wins"],
            sign_p=d["sign_p"],
            t_test=PairedTTest.from_dict(d["t_test"]) if d["t_test"] else None,
        )


def compare_to_baseline(
    records: pd.DataFrame,
    phi_order: list[float],
    condition_order: list[str],
    master_seed: int,
    resamples: int = DEFAULT_RESAMPLES,
    level: float = DEFAULT_LEVEL,
) -> list[GroupSummary]:
    """Summaries per (phi, condition) in canonical order.

    ``records`` needs columns phi, condition, trial, ae, mse and preliminary.
    Method groups are paired with Baseline by trial index for the sign test
    and the paired t-test.
    """
    used = records[~records["preliminary"].astype(bool)]
    summaries: list[GroupSummary] = []

    for phi_idx, phi in enumerate(phi_order):
        at_phi = used[used["phi"] == phi]
        base = at_phi[at_phi["condition"] == BASELINE].set_index("trial").sort_index()
        base_ae = summarize(base["ae"]) if len(base) else None
        base_mse = summarize(base["mse"]) if len(base) else None

        for condition in condition_order:
            group = at_phi[at_phi["condition"] == condition].sort_values("trial")
            if group.empty:
                continue
            ae = summarize(group["ae"])
            mse = summarize(group["mse"])

            ci = None
            if len(group) >= 2:
                ci = bootstrap_ci(
                    group["ae"].to_numpy(),
                    resamples=resamples,
                    level=level,
                    seed=derive_seed(master_seed, "bootstrap", phi_idx, condition),
                )

            summary = GroupSummary(phi=phi, condition=condition, ae=ae, mse=mse, ci=ci)
            if condition != BASELINE and base_ae is not None:
                summary = _with_baseline(summary, group, base, base_ae, base_mse)
            summaries.append(summary)

    logger.info("Summarized %d groups", len(summaries))
    return summaries


def _with_baseline(
    summary: GroupSummary,
    group: pd.DataFrame,
    base: pd.DataFrame,
    base_ae: MetricSummary,
    base_mse: MetricSummary,
) -> GroupSummary:
    reduction_ae = improvement(base_ae.mean, summary.ae.mean) if base_ae.mean > 0 else None
    reduction_mse = improvement(base_mse.mean, summary.mse.mean) if base_mse.mean > 0 else None

    paired = group.set_index("trial")["ae"].to_frame("method").join(
        base["ae"].to_frame("baseline"), how="inner"
    )
    wins = int((paired["method"] < paired["baseline"]).sum())
    sign_p = sign_test(wins, len(paired))
    t_test = paired_t_test(paired["method"], paired["baseline"]) if len(paired) >= 2 else None

    return GroupSummary(
        phi=summary.phi,
        condition=summary.condition,
        ae=summary.ae,
        mse=summary.mse,
        reduction_ae_pct=reduction_ae,
        reduction_mse_pct=reduction_mse,
        ci=summary.ci,
        wins=wins,
        sign_p=sign_p,
        t_test=t_test,
    )


def format_comparison(summaries: list[GroupSummary]) -> list[str]:
    """Human-readable report lines, one block per phase."""
    lines = ["=" * 60, "BASELINE COMPARISON", "=" * 60]
    current = None
    for s in summaries:
        if s.phi != current:
            current = s.phi
            lines.append(f"\nphi = {s.phi:g} rad")
        line = f"  {s.condition:<13} AE {s.ae.mean:.4f} +/- {s.ae.std:.4f}  MSE {s.mse.mean:.5f}"
        if s.reduction_mse_pct is not None:
            line += f"  MSE reduction {s.reduction_mse_pct:+.1f}%"
        if s.sign_p is not None:
            line += f"  sign p={s.sign_p:.3g}"
        lines.append(line)
    return lines
