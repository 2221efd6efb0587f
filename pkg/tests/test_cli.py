"""Tests for the aurora-dd command line."""

import json

import pytest
from click.testing import CliRunner

from aurora.campaign.cli import cli_main, main
from aurora.errors import EXIT_USAGE

SMALL = """\
master_seed: 3
trials: 2
bootstrap_resamples: 200
conditions: [Baseline, AuroraDD]
"""


@pytest.fixture
def runner():
    return CliRunner()


@pytest.fixture
def small_yaml(tmp_path):
    path = tmp_path / "small.yml"
    path.write_text(SMALL)
    return path


def write_config(tmp_path, text):
    path = tmp_path / "campaign.yml"
    path.write_text(text)
    return str(path)


class TestGroup:
    def test_help_lists_commands(self, runner):
        result = runner.invoke(main, ["--help"])
        assert result.exit_code == 0
        for command in ("calibrate", "run", "stats", "plot", "tune"):
            assert command in result.output

    def test_version(self, runner):
        result = runner.invoke(main, ["--version"])
        assert result.exit_code == 0
        assert "aurora-dd" in result.output

    def test_unknown_subcommand(self, runner):
        result = runner.invoke(main, ["frobnicate"])
        assert result.exit_code == 2


class TestCalibrate:
    def test_reports_offset(self, runner, tmp_path):
        result = runner.invoke(main, ["-q", "calibrate", "-o", str(tmp_path)])
        assert result.exit_code == 0, result.output
        assert "delta_phi* = 0.1500 rad" in result.output
        saved = json.loads((tmp_path / "calibration.json").read_text())
        assert saved["delta_phi_star"] == pytest.approx(0.15, abs=1e-12)
        assert (tmp_path / "calibration_curves.jsonl").exists()

    def test_ignores_pinned_offset(self, runner, tmp_path):
        config = write_config(tmp_path, "delta_phi_star_rad: 0.02\n")
        result = runner.invoke(main, ["-q", "calibrate", "-c", config, "-o", str(tmp_path)])
        assert result.exit_code == 0, result.output
        assert "0.1500" in result.output


class TestRun:
    def test_writes_results(self, runner, small_yaml, tmp_path):
        out = tmp_path / "out"
        result = runner.invoke(main, ["-q", "run", "-c", str(small_yaml), "-o", str(out)])
        assert result.exit_code == 0, result.output
        assert "Step 1: Running 16 cells (seed 3)" in result.output
        assert "BASELINE COMPARISON" in result.output
        for name in ("records.csv", "summary.csv", "result.json", "closed_loop.jsonl"):
            assert (out / name).exists()

    def test_seed_override(self, runner, small_yaml, tmp_path):
        out = tmp_path / "out"
        result = runner.invoke(
            main, ["-q", "run", "-c", str(small_yaml), "-o", str(out), "--seed", "8"]
        )
        assert result.exit_code == 0, result.output
        assert json.loads((out / "result.json").read_text())["config"]["master_seed"] == 8

    def test_config_error_exit_code(self, runner, tmp_path):
        config = write_config(tmp_path, "trials: 0\n")
        result = runner.invoke(main, ["run", "-c", config, "-o", str(tmp_path)])
        assert result.exit_code == 3
        assert "config-invalid" in result.output
        assert "trials" in result.output

    def test_missing_config(self, runner, tmp_path):
        result = runner.invoke(main, ["run", "-c", str(tmp_path / "absent.yml")])
        assert result.exit_code == 3
        assert "config-missing" in result.output

    def test_baseline_only_exits_empty(self, runner, tmp_path):
        config = write_config(tmp_path, "trials: 2\nbootstrap_resamples: 200\n"
                                        "conditions: [Baseline]\n")
        result = runner.invoke(main, ["-q", "run", "-c", config, "-o", str(tmp_path / "o")])
        assert result.exit_code == 6

    def test_no_conditions_exits_empty(self, runner, tmp_path):
        config = write_config(tmp_path, "trials: 2\nconditions: []\n")
        result = runner.invoke(main, ["-q", "run", "-c", config, "-o", str(tmp_path / "o")])
        assert result.exit_code == 6


class TestStats:
    def test_reproduces_summary(self, runner, small_yaml, tmp_path):
        out = tmp_path / "out"
        assert runner.invoke(
            main, ["-q", "run", "-c", str(small_yaml), "-o", str(out)]
        ).exit_code == 0
        original = (out / "summary.csv").read_bytes()
        (out / "summary.csv").unlink()

        result = runner.invoke(main, ["-q", "stats", str(out)])
        assert result.exit_code == 0, result.output
        assert (out / "summary.csv").read_bytes() == original

    def test_missing_records(self, runner, tmp_path):
        result = runner.invoke(main, ["stats", str(tmp_path)])
        assert result.exit_code == 5
        assert "error [io]" in result.output


class TestPlot:
    def test_writes_figures(self, runner, small_yaml, tmp_path):
        pytest.importorskip("matplotlib")
        pytest.importorskip("seaborn")
        out = tmp_path / "out"
        runner.invoke(main, ["-q", "run", "-c", str(small_yaml), "-o", str(out)])
        result = runner.invoke(main, ["plot", str(out / "result.json")])
        assert result.exit_code == 0, result.output
        assert (out / "ae_bars.svg").exists()
        assert "skipped ae_log_zne.svg" in result.output


class TestTune:
    def test_writes_table(self, runner, small_yaml, tmp_path):
        result = runner.invoke(
            main, ["tune", "-c", str(small_yaml), "-o", str(tmp_path), "--sigma", "0.1"]
        )
        assert result.exit_code == 0, result.output
        rows = json.loads((tmp_path / "tuning.json").read_text())
        assert [row["sigma_qs_rad_per_us"] for row in rows] == [0.1]
        assert len(rows[0]["reductions"]) == 4


class TestCliMain:
    def test_success(self, tmp_path):
        assert cli_main(["-q", "calibrate", "-o", str(tmp_path)]) == 0

    def test_usage_error(self):
        assert cli_main(["frobnicate"]) == EXIT_USAGE == 2

    def test_bad_option_value(self, tmp_path):
        assert cli_main(["run", "-o", str(tmp_path), "--workers", "many"]) == EXIT_USAGE

    def test_config_error(self, tmp_path):
        config = write_config(tmp_path, "shots: -1\n")
        assert cli_main(["run", "-c", config]) == 3
