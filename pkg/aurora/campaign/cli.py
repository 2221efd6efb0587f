"""Command-line interface: ``aurora-dd calibrate|run|stats|plot|tune``."""

from __future__ import annotations

import dataclasses
import json
import logging
from collections.abc import Sequence
from pathlib import Path

import click

from aurora import __version__
from aurora.campaign.config import CampaignConfig, parse_config
from aurora.errors import EXIT_EMPTY, EXIT_OK, EXIT_USAGE, AuroraError, ResultsIOError


class AuroraGroup(click.Group):
    """Maps every AuroraError to its category message and exit code."""

    def invoke(self, ctx: click.Context):
        try:
            return super().invoke(ctx)
        except AuroraError as e:
            click.echo(f"error [{e.category}]: {e}", err=True)
            ctx.exit(e.exit_code)


def _configure_logging(verbose: int, quiet: bool) -> None:
    if quiet:
        level = logging.ERROR
    else:
        level = {0: logging.WARNING, 1: logging.INFO}.get(verbose, logging.DEBUG)
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s", force=True)


def config_options(func):
    """--config, --seed, --out and --workers, shared by the campaign commands."""
    func = click.option("--workers", type=click.IntRange(min=1), default=None,
                        help="Worker processes for campaign cells.")(func)
    func = click.option("--out", "-o", "out", type=click.Path(file_okay=False), default=None,
                        help="Output directory (default: output_dir from the config).")(func)
    func = click.option("--seed", type=int, default=None, help="Master seed.")(func)
    func = click.option("--config", "-c", "config_path", type=click.Path(), default=None,
                        help="Campaign config (YAML).")(func)
    return func


def _load(config_path: str | None, seed: int | None, out: str | None,
          workers: int | None = None) -> CampaignConfig:
    config = parse_config(config_path) if config_path else CampaignConfig()
    return config.with_overrides(master_seed=seed, output_dir=out, workers=workers)


@click.group(cls=AuroraGroup)
@click.version_option(__version__, prog_name="aurora-dd")
@click.option("--verbose", "-v", count=True, help="-v for progress logs, -vv for debug.")
@click.option("--quiet", "-q", is_flag=True, help="Errors only; no progress bars.")
@click.pass_context
def main(ctx: click.Context, verbose: int, quiet: bool):
    """Aurora-DD phase-coherence compensation campaigns on the local emulator."""
    ctx.ensure_object(dict)
    ctx.obj["quiet"] = quiet
    _configure_logging(verbose, quiet)


@main.command()
@config_options
@click.pass_context
def calibrate(ctx: click.Context, config_path, seed, out, workers):
    """Sweep the offset grid and report delta_phi*."""
    from aurora.campaign.results import write_calibration
    from aurora.campaign.runner import calibrate as calibrate_campaign
    from aurora.physics.emulator import LocalEmulator

    config = dataclasses.replace(_load(config_path, seed, out), delta_phi_star_rad=None)

    click.echo("Step 1: Calibrating...")
    result = calibrate_campaign(config, LocalEmulator(), progress=not ctx.obj["quiet"])
    step = config.grid_step_rad
    click.echo(f"  delta_phi* = {result.delta_phi_star:.4f} rad (grid step {step:g})")

    click.echo("Step 2: Writing calibration...")
    for path in write_calibration(result, config.output_dir):
        click.echo(f"  {path}")


@main.command()
@config_options
@click.pass_context
def run(ctx: click.Context, config_path, seed, out, workers):
    """Run the full campaign and write CSV, JSON and JSONL results."""
    from aurora.campaign.results import write_results
    from aurora.campaign.runner import run_campaign
    from aurora.eval.baseline_comparison import format_comparison

    config = _load(config_path, seed, out, workers)
    n_cells = len(config.phi_set_rad) * len(config.conditions) * config.trials

    click.echo(f"Step 1: Running {n_cells} cells (seed {config.master_seed})...")
    rs = run_campaign(config, progress=not ctx.obj["quiet"])
    click.echo(f"  delta_phi* = {rs.calibration.delta_phi_star:.4f} rad")
    click.echo(f"  {len(rs.records)} records, {len(rs.zne_points)} ZNE sub-runs")

    click.echo("Step 2: Writing results...")
    for path in write_results(rs, config.output_dir):
        click.echo(f"  {path}")

    if rs.summaries:
        click.echo("\n".join(format_comparison(list(rs.summaries))))
    if rs.method_rows == 0:
        click.echo("No mitigation condition was summarized against the Baseline.", err=True)
        ctx.exit(EXIT_EMPTY)


@main.command()
@click.argument("results_dir", type=click.Path(exists=True, file_okay=False))
@config_options
@click.pass_context
def stats(ctx: click.Context, results_dir, config_path, seed, out, workers):
    """Recompute summary.csv from records.csv."""
    from aurora.campaign.results import load_result, read_records, write_summary
    from aurora.eval.baseline_comparison import compare_to_baseline, format_comparison

    results_dir = Path(results_dir)
    if config_path is None and (results_dir / "result.json").exists():
        config = load_result(results_dir).config.with_overrides(master_seed=seed)
    else:
        config = _load(config_path, seed, None)

    click.echo("Step 1: Loading records...")
    df = read_records(results_dir)
    click.echo(f"  {len(df)} records")

    click.echo("Step 2: Summarizing...")
    summaries = compare_to_baseline(
        df,
        list(dict.fromkeys(df["phi"])),
        list(dict.fromkeys(df["condition"])),
        config.master_seed,
        resamples=config.bootstrap_resamples,
        level=config.ci_level,
    )
    path = write_summary(summaries, Path(out or results_dir) / "summary.csv")
    click.echo(f"  {path}")
    if summaries:
        click.echo("\n".join(format_comparison(summaries)))
    if not any(s.is_method for s in summaries):
        click.echo("No mitigation condition was summarized against the Baseline.", err=True)
        ctx.exit(EXIT_EMPTY)


@main.command()
@click.argument("result", type=click.Path(exists=True))
@click.option("--out", "-o", "out", type=click.Path(file_okay=False), default=None,
              help="Figure directory (default: next to result.json).")
def plot(result, out):
    """Draw the comparison figures from result.json."""
    from aurora.campaign.plots import emit_plots
    from aurora.campaign.results import load_result

    result = Path(result)
    rs = load_result(result)
    out = Path(out) if out else (result if result.is_dir() else result.parent)

    report = emit_plots(rs, out)
    for path in report.written:
        click.echo(f"  {path}")
    for notice in report.skipped:
        click.echo(f"  skipped {notice}")


@main.command()
@config_options
@click.option("--sigma", "sigmas", type=float, multiple=True,
              help="Candidate quasi-static spread in rad/us (repeatable).")
def tune(config_path, seed, out, workers, sigmas):
    """Sweep sigma_qs and report the per-phase AuroraDD MSE reduction."""
    from aurora.campaign.tuning import DEFAULT_SIGMAS, REDUCTION_BAND, tune_sigma

    config = _load(config_path, seed, out, workers)
    rows = tune_sigma(config, sigmas or DEFAULT_SIGMAS)

    lo, hi = REDUCTION_BAND
    click.echo(f"AuroraDD MSE reduction vs Baseline (target band {lo:g}-{hi:g}%)")
    for row in rows:
        cells = "  ".join(f"phi={phi:g}: {r:5.1f}%" for phi, r in row.reductions)
        click.echo(f"  sigma_qs={row.sigma_qs:<6g} {cells}  {'in band' if row.in_band else ''}")

    output_path = Path(config.output_dir) / "tuning.json"
    try:
        output_path.parent.mkdir(parents=True, exist_ok=True)
        with open(output_path, "w") as f:
            json.dump([row.to_dict() for row in rows], f, indent=2)
    except OSError as e:
        raise ResultsIOError(f"cannot write {output_path}: {e}") from e
    click.echo(f"Results saved to {output_path}")


def cli_main(argv: Sequence[str] | None = None) -> int:
    """Run the CLI on ``argv`` and return the process exit code."""
    try:
        rv = main.main(
            args=list(argv) if argv is not None else None,
            prog_name="aurora-dd",
            standalone_mode=False,
        )
    except click.exceptions.UsageError as e:
        e.show()
        return EXIT_USAGE
    except click.exceptions.ClickException as e:
        e.show()
        return e.exit_code
    except click.exceptions.Abort:
        click.echo("Aborted!", err=True)
        return 1
    return rv if isinstance(rv, int) else EXIT_OK


if __name__ == "__main__":
    main()
