"""Tests for metrics, small-sample inference and baseline comparison."""

import math

import numpy as np
import pandas as pd
import pytest

from aurora.errors import InvalidArgumentError
from aurora.eval.baseline_comparison import GroupSummary, compare_to_baseline, format_comparison
from aurora.eval.inference import bootstrap_ci, paired_t_test, sign_test
from aurora.eval.metrics import absolute_error, improvement, mse, summarize


def _records(rows):
    return pd.DataFrame(rows, columns=["phi", "condition", "trial", "ae", "mse", "preliminary"])


@pytest.fixture
def paired_records():
    rows = []
    for trial, (base, method) in enumerate([(1.0, 0.1), (1.0, 0.2), (1.0, 0.3)]):
        rows.append((0.05, "Baseline", trial, base, base * base, False))
        rows.append((0.05, "AuroraDD", trial, method, method * method, False))
    return _records(rows)


class TestMetrics:
    def test_absolute_error(self):
        assert absolute_error(-0.010, 0.99875) == pytest.approx(1.00875)
        assert absolute_error(0.4, 0.4) == 0.0
        assert absolute_error(0.98, math.cos(0.20)) == pytest.approx(0.000067, abs=1e-6)

    def test_mse(self):
        assert mse(0.0, 1.0) == 1.0
        assert mse(0.3, 0.3) == 0.0

    def test_summarize(self):
        s = summarize([1.0, 2.0, 3.0])
        assert s.mean == pytest.approx(2.0)
        assert s.std == pytest.approx(1.0)
        assert s.n == 3

    def test_summarize_constant(self):
        assert summarize([0.4, 0.4, 0.4]).std == 0.0

    def test_summarize_single(self):
        s = summarize([0.7])
        assert s.n == 1 and s.std == 0.0 and not s.std_applicable

    def test_summarize_empty(self):
        with pytest.raises(InvalidArgumentError):
            summarize([])

    def test_improvement(self):
        assert improvement(1.0088, 0.0079) == pytest.approx(99.2, abs=0.05)
        assert improvement(0.5, 0.5) == 0.0
        assert improvement(1.0, 0.32) == pytest.approx(68.0)

    def test_improvement_perfect_method(self):
        for baseline in (0.01, 0.7, 1.9):
            assert improvement(baseline, 0.0) == 100.0

    def test_improvement_needs_positive_baseline(self):
        with pytest.raises(InvalidArgumentError):
            improvement(0.0, 0.1)


class TestBootstrap:
    def test_constant(self):
        ci = bootstrap_ci([0.3] * 30, resamples=1000, seed=1)
        assert (ci.lo, ci.hi) == (0.3, 0.3)

    def test_bounds(self):
        ci = bootstrap_ci([0.0, 1.0], resamples=1000, seed=2)
        assert 0.0 <= ci.lo <= ci.hi <= 1.0

    def test_deterministic(self):
        values = np.random.default_rng(0).normal(size=30)
        assert bootstrap_ci(values, seed=5) == bootstrap_ci(values, seed=5)

    def test_needs_two_values(self):
        with pytest.raises(InvalidArgumentError):
            bootstrap_ci([1.0])

    @pytest.mark.slow
    def test_coverage(self):
        rng = np.random.default_rng(12345)
        hits = 0
        for rep in range(1000):
            ci = bootstrap_ci(rng.normal(size=30), resamples=1000, seed=rep)
            hits += ci.lo <= 0.0 <= ci.hi
        assert 0.90 <= hits / 1000 <= 0.98

    @pytest.mark.slow
    def test_width_shrinks_with_more_trials(self):
        rng = np.random.default_rng(777)
        widths = {30: [], 120: []}
        for rep in range(200):
            for n in widths:
                widths[n].append(bootstrap_ci(rng.normal(size=n), resamples=1000, seed=rep).width)
        assert np.median(widths[120]) < np.median(widths[30])


class TestSignTest:
    @pytest.mark.parametrize("wins,n,p", [(3, 3, 0.125), (0, 3, 1.0), (2, 3, 0.5)])
    def test_tail(self, wins, n, p):
        assert sign_test(wins, n) == p

    @pytest.mark.parametrize("n", [4, 10, 30, 60])
    def test_all_wins(self, n):
        assert sign_test(n, n) == 2.0**-n

    def test_wins_exceed_n(self):
        with pytest.raises(InvalidArgumentError):
            sign_test(4, 3)


class TestPairedTTest:
    def test_known_statistic(self):
        b = [1.0] * 5
        a = [2.0, 3.0, 4.0, 3.0, 4.0]
        result = paired_t_test(a, b)
        assert result.t == pytest.approx(5.8797, abs=1e-4)
        assert 0.001 < result.p < 0.01
        assert result.df == 4

    def test_swapped_samples_flip_sign(self):
        rng = np.random.default_rng(8)
        a, b = rng.normal(0.3, 1.0, size=12), rng.normal(size=12)
        forward, backward = paired_t_test(a, b), paired_t_test(b, a)
        assert backward.t == pytest.approx(-forward.t, rel=1e-12)
        assert backward.p == pytest.approx(forward.p, rel=1e-12)
        assert backward.df == forward.df

    def test_identical_is_degenerate(self):
        result = paired_t_test([0.2, 0.4, 0.6], [0.2, 0.4, 0.6])
        assert result.degenerate
        assert result.p is None

    def test_length_mismatch(self):
        with pytest.raises(InvalidArgumentError):
            paired_t_test([1.0, 2.0], [1.0])


class TestCompareToBaseline:
    def test_reductions_and_sign_test(self, paired_records):
        baseline, method = compare_to_baseline(
            paired_records, [0.05], ["Baseline", "AuroraDD"], master_seed=1, resamples=200
        )
        assert baseline.reduction_ae_pct is None
        assert method.reduction_ae_pct == pytest.approx(80.0)
        assert method.reduction_mse_pct == pytest.approx(100 * (1 - 0.14 / 3))
        assert method.wins == 3
        assert method.sign_p == 0.125
        assert method.t_test is not None and method.t_test.t < 0

    def test_preliminary_trial_excluded(self, paired_records):
        paired_records.loc[paired_records["trial"] == 0, "preliminary"] = True
        summaries = compare_to_baseline(
            paired_records, [0.05], ["Baseline", "AuroraDD"], master_seed=1, resamples=200
        )
        assert all(s.ae.n == 2 for s in summaries)

    def test_empty_conditions(self):
        assert compare_to_baseline(_records([]), [0.05], [], master_seed=0) == []

    def test_round_trip(self, paired_records):
        for s in compare_to_baseline(
            paired_records, [0.05], ["Baseline", "AuroraDD"], master_seed=1, resamples=200
        ):
            assert GroupSummary.from_dict(s.to_dict()) == s

    def test_format(self, paired_records):
        summaries = compare_to_baseline(
            paired_records, [0.05], ["Baseline", "AuroraDD"], master_seed=1, resamples=200
        )
        text = "\n".join(format_comparison(summaries))
        assert "AuroraDD" in text and "sign p=0.125" in text
