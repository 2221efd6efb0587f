"""Tests for zero-noise extrapolation and readout inversion."""

import math

import numpy as np
import pytest

from aurora.errors import InvalidArgumentError
from aurora.mitigation.readout import mitigate_probabilities, readout_mitigate
from aurora.mitigation.zne import ZnePoint, zne_extrapolate
from aurora.physics.emulator import (
    IDENTITY_READOUT,
    NoiseProfile,
    ShotCounts,
    apply_readout,
    backend_execute,
    estimate_z,
    symmetric_readout,
)
from aurora.physics.schedule import build_circuit


class TestZneExtrapolate:
    def test_overshoot(self):
        fit = zne_extrapolate([ZnePoint(1.0, 0.90), ZnePoint(1.05, 0.88)])
        assert fit.b == pytest.approx(-0.4)
        assert fit.a == pytest.approx(1.30)
        assert fit.z0 == pytest.approx(1.30)
        assert fit.out_of_range

    def test_flat_line(self):
        fit = zne_extrapolate([ZnePoint(1.0, 0.5), ZnePoint(1.05, 0.5)])
        assert fit.z0 == pytest.approx(0.5)
        assert not fit.out_of_range

    def test_exact_recovery_on_linear_data(self):
        lams = [1.0, 1.5, 2.0, 3.0]
        fit = zne_extrapolate([ZnePoint(lam, 0.8 - 0.1 * lam) for lam in lams])
        assert fit.a == pytest.approx(0.8, abs=1e-12)
        assert fit.residual < 1e-12

    def test_two_point_fit_passes_through_both(self):
        points = [ZnePoint(1.0, 0.62), ZnePoint(1.05, 0.57)]
        fit = zne_extrapolate(points)
        for p in points:
            assert fit.predict(p.lam) == pytest.approx(p.z, abs=1e-12)
        assert fit.predict(0.0) == fit.z0
        assert fit.residual < 1e-12

    def test_residual_of_noisy_points(self):
        fit = zne_extrapolate([ZnePoint(1.0, 0.9), ZnePoint(2.0, 0.7), ZnePoint(3.0, 0.6)])
        assert fit.b == pytest.approx(-0.15)
        assert fit.a == pytest.approx(1.0333333333, abs=1e-9)
        # deviations 1/60, -1/30, 1/60
        assert fit.residual == pytest.approx(math.sqrt(1 / 1800), rel=1e-9)

    def test_order_independent(self):
        pts = [ZnePoint(1.05, 0.88), ZnePoint(1.0, 0.90), ZnePoint(1.2, 0.81)]
        assert zne_extrapolate(pts) == zne_extrapolate(list(reversed(pts)))

    def test_needs_two_distinct_scales(self):
        with pytest.raises(InvalidArgumentError):
            zne_extrapolate([ZnePoint(1.0, 0.9), ZnePoint(1.0, 0.8)])

    def test_non_positive_scale_rejected(self):
        with pytest.raises(InvalidArgumentError):
            ZnePoint(0.0, 0.5)

    def test_moves_toward_noise_free_value(self):
        phi = 0.1
        profile = NoiseProfile(eps_sys=0.0, sigma_qs=0.0, readout=IDENTITY_READOUT)
        template = build_circuit(phi, 0.0, "AuroraDD")
        points = [
            ZnePoint(lam, estimate_z(backend_execute(template, 0, profile.with_scale(lam), 1)))
            for lam in (1.0, 1.05)
        ]
        ideal = estimate_z(backend_execute(template, 0, profile.with_scale(0.0), 1))
        assert ideal == pytest.approx(math.cos(phi), abs=1e-12)
        fit = zne_extrapolate(points)
        assert abs(fit.z0 - ideal) < abs(points[0].z - ideal)


class TestReadoutMitigate:
    def test_identity_unchanged(self):
        m = readout_mitigate(ShotCounts(300, 700), IDENTITY_READOUT)
        assert (m.p0, m.p1) == pytest.approx((0.3, 0.7))
        assert not m.clamped

    def test_symmetric_flip(self):
        m = readout_mitigate(ShotCounts(82, 18), symmetric_readout(0.1))
        assert m.p0 == pytest.approx(0.9)
        assert m.z == pytest.approx(0.8)

    def test_clamped_at_boundary(self):
        m = readout_mitigate(ShotCounts(100, 0), symmetric_readout(0.1))
        assert m.p0 == 1.0
        assert m.p1 == 0.0
        assert m.clamped

    def test_singular_matrix(self):
        with pytest.raises(InvalidArgumentError):
            mitigate_probabilities(0.5, 0.5, ((0.5, 0.5), (0.5, 0.5)))

    def test_round_trip_on_probabilities(self):
        readout = symmetric_readout(0.03, 0.07)
        for z in np.linspace(-1.0, 1.0, 21):
            observed = apply_readout(float(z), readout)
            p0 = (1.0 + observed) / 2.0
            assert mitigate_probabilities(p0, 1.0 - p0, readout).z == pytest.approx(z, abs=1e-10)

    def test_expectation_counts(self):
        readout = symmetric_readout(0.01)
        counts = ShotCounts(0, 0, exact_z=apply_readout(0.42, readout))
        assert readout_mitigate(counts, readout).z == pytest.approx(0.42, abs=1e-12)
