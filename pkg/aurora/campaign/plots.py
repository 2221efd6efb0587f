"""Static SVG comparison figures.

- ae_bars.svg: mean AE +/- std per phase, Baseline vs AuroraDD
- cosine_overlay.svg: cos(phi) against mean measured <Z> for both conditions
- ae_log_zne.svg: log-scale AE for Baseline, AuroraDD and AuroraDDZNE

Needs the ``plots`` extra (matplotlib and seaborn).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import pandas as pd

from aurora.campaign.runner import ResultSet
from aurora.errors import MissingDependencyError, ResultsIOError
from aurora.physics.schedule import MitigationCondition

logger = logging.getLogger(__name__)

BASELINE = MitigationCondition.BASELINE.value
AURORA = MitigationCondition.AURORA_DD.value
AURORA_ZNE = MitigationCondition.AURORA_DD_ZNE.value

PALETTE = {BASELINE: "#8c8c8c", AURORA: "#1f77b4", AURORA_ZNE: "#d62728"}
RC = {
    "svg.hashsalt": "aurora-dd",
    "svg.fonttype": "none",
    "font.size": 9,
    "figure.figsize": (5.0, 3.2),
    "savefig.bbox": "tight",
}


@dataclass
class PlotReport:
    written: list[Path] = field(default_factory=list)
    skipped: list[str] = field(default_factory=list)


def _plotting():
    try:
        import matplotlib

        matplotlib.use("Agg")
        import matplotlib.pyplot as plt
        import seaborn as sns
    except ImportError as e:
        raise MissingDependencyError(
            f"plotting needs the 'plots' extra (pip install 'aurora-dd-toolkit[plots]'): {e}"
        ) from e
    return plt, sns


def _groups(df: pd.DataFrame, conditions: list[str]) -> pd.DataFrame:
    return df[df["condition"].isin(conditions) & ~df["preliminary"].astype(bool)]


def _missing(df: pd.DataFrame, conditions: list[str]) -> list[str]:
    present = set(df["condition"])
    return [c for c in conditions if c not in present]


def _save(fig, plt, path: Path) -> Path:
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)
    return path


def _ae_bars(df: pd.DataFrame, plt, sns, path: Path) -> Path:
    fig, ax = plt.subplots()
    sns.barplot(
        data=df, x="phi", y="ae", hue="condition", hue_order=[BASELINE, AURORA],
        palette=PALETTE, errorbar="sd", capsize=0.1, ax=ax,
    )
    ax.set_xlabel(r"$\phi$ (rad)")
    ax.set_ylabel("absolute error")
    ax.legend(title=None)
    return _save(fig, plt, path)


def _cosine_overlay(df: pd.DataFrame, plt, path: Path) -> Path:
    phis = np.sort(df["phi"].unique())
    span = np.linspace(phis.min(), phis.max(), 200) if len(phis) > 1 else phis

    fig, ax = plt.subplots()
    ax.plot(span, np.cos(span), color="black", lw=1, label=r"ideal $\cos\phi$")
    for condition, marker in ((BASELINE, "s"), (AURORA, "o")):
        stats = df[df["condition"] == condition].groupby("phi")["z_meas"].agg(["mean", "std"])
        ax.errorbar(
            stats.index, stats["mean"], yerr=stats["std"].fillna(0.0), fmt=marker,
            color=PALETTE[condition], capsize=3, label=condition,
        )
    ax.set_xlabel(r"$\phi$ (rad)")
    ax.set_ylabel(r"$\langle Z \rangle$")
    ax.legend()
    return _save(fig, plt, path)


def _ae_log(df: pd.DataFrame, plt, sns, path: Path) -> Path:
    fig, ax = plt.subplots()
    sns.barplot(
        data=df, x="phi", y="ae", hue="condition", hue_order=[BASELINE, AURORA, AURORA_ZNE],
        palette=PALETTE, errorbar="sd", capsize=0.1, ax=ax,
    )
    ax.set_yscale("log")
    ax.set_xlabel(r"$\phi$ (rad)")
    ax.set_ylabel("absolute error (log)")
    ax.legend(title=None)
    return _save(fig, plt, path)


def emit_plots(rs: ResultSet, output_dir: str | Path) -> PlotReport:
    """Write the figures the result supports; missing groups skip a figure with a notice."""
    output_dir = Path(output_dir)
    df = rs.records_frame()
    report = PlotReport()
    plt, sns = _plotting()

    try:
        output_dir.mkdir(parents=True, exist_ok=True)
        with plt.rc_context(RC):
            sns.set_theme(style="whitegrid", rc=RC)

            pair = [BASELINE, AURORA]
            missing = _missing(df, pair)
            if missing:
                names = ", ".join(missing)
                report.skipped.append(f"ae_bars.svg, cosine_overlay.svg: no {names} records")
            else:
                sub = _groups(df, pair)
                report.written.append(_ae_bars(sub, plt, sns, output_dir / "ae_bars.svg"))
                report.written.append(_cosine_overlay(sub, plt, output_dir / "cosine_overlay.svg"))

            triple = [BASELINE, AURORA, AURORA_ZNE]
            missing = _missing(df, triple)
            if missing:
                report.skipped.append(f"ae_log_zne.svg: no {', '.join(missing)} records")
            else:
                sub = _groups(df, triple)
                report.written.append(_ae_log(sub, plt, sns, output_dir / "ae_log_zne.svg"))
    except OSError as e:
        raise ResultsIOError(f"cannot write plots to {output_dir}: {e}") from e

    for notice in report.skipped:
        logger.warning("Skipped %s", notice)
    return report
