"""Tests for the sign-based offset controller and the calibration sweep."""

import math

import pytest

from aurora.control.calibration import CalibrationResult, calibrate_offset, offset_grid
from aurora.control.controller import (
    ControllerState,
    Termination,
    ideal_z,
    objective,
    phase_error_proxy,
    run_closed_loop,
    sign_update,
)
from aurora.errors import GainBoundError
from aurora.physics.emulator import IDENTITY_READOUT, LocalEmulator, NoiseProfile
from aurora.physics.schedule import DEFAULT_IDLE_NS

PHI_SET = (0.05, 0.10, 0.15, 0.20)


@pytest.fixture
def backend():
    return LocalEmulator()


def biased(eps: float) -> NoiseProfile:
    return NoiseProfile(eps_sys=eps, sigma_qs=0.0, readout=IDENTITY_READOUT)


class TestProxies:
    @pytest.mark.parametrize("phi,z", [(0.0, 1.0), (0.20, 0.980067), (math.pi / 2, 0.0)])
    def test_ideal_z(self, phi, z):
        assert ideal_z(phi) == pytest.approx(z, abs=1e-6)

    def test_phase_error_proxy(self):
        assert phase_error_proxy(1.0, 0.99) == pytest.approx(0.01)
        assert phase_error_proxy(0.98877, 0.98877) == 0.0
        assert phase_error_proxy(0.5, 0.7) == pytest.approx(-0.2)

    def test_objective(self):
        assert objective(0.99875, 0.95) == pytest.approx(0.0023766, abs=1e-7)
        assert objective(0.3, 0.3) == 0.0
        assert objective(1.0, -1.0) == 4.0


class TestSignUpdate:
    def test_positive_step(self):
        state = sign_update(ControllerState(delta_phi=0.0, eta=0.01), 0.02)
        assert state.delta_phi == pytest.approx(0.01)
        assert state.iteration == 1
        assert len(state.history) == 1
        assert state.history[0].objective == pytest.approx(0.0004)

    def test_zero_holds(self):
        state = sign_update(ControllerState(delta_phi=0.15, eta=0.01), 0.0)
        assert state.delta_phi == 0.15

    def test_negative_step(self):
        state = sign_update(ControllerState(delta_phi=0.05, eta=0.02), -0.3)
        assert state.delta_phi == pytest.approx(0.03)

    def test_deadband_holds(self):
        state = sign_update(ControllerState(delta_phi=0.1, eta=0.01), 1e-3, deadband=0.01)
        assert state.delta_phi == 0.1

    def test_gain_bound(self):
        with pytest.raises(GainBoundError):
            ControllerState(delta_phi=0.0, eta=0.03)


class TestClosedLoop:
    def test_converges_to_bias(self, backend):
        state = run_closed_loop(0.1, backend, biased(0.15), shots=0, eta=0.01, max_iters=40,
                                seed=1)
        assert abs(state.delta_phi - 0.15) <= 0.01
        assert state.iteration <= 20
        assert state.termination == Termination.CONVERGED

    def test_bounded_iterates_and_monotone_objective(self, backend):
        state = run_closed_loop(0.1, backend, biased(0.15), shots=0, eta=0.01, max_iters=40,
                                seed=1)
        steps = [h.delta_phi for h in state.history]
        assert all(abs(b - a) <= 0.01 + 1e-15 for a, b in zip(steps, steps[1:]))
        outside = [h.objective for h in state.history if abs(0.15 - h.delta_phi) >= 0.01]
        assert all(b <= a for a, b in zip(outside, outside[1:]))

    def test_unbiased_stops_immediately(self, backend):
        state = run_closed_loop(0.1, backend, biased(0.0), shots=0, eta=0.01, max_iters=40,
                                seed=1)
        assert state.iteration == 1
        assert state.delta_phi == 0.0

    def test_gain_bound_at_construction(self, backend):
        with pytest.raises(GainBoundError):
            run_closed_loop(0.1, backend, biased(0.15), shots=0, eta=0.03, max_iters=5, seed=1)

    def test_max_iters(self, backend):
        state = run_closed_loop(0.1, backend, biased(0.15), shots=0, eta=0.01, max_iters=3,
                                seed=1)
        assert state.iteration == 3
        assert state.termination == Termination.MAX_ITERS

    def test_limit_cycle_returns_best(self, backend):
        # the bias sits between two reachable offsets
        state = run_closed_loop(0.1, backend, biased(0.155), shots=0, eta=0.01, max_iters=40,
                                seed=1)
        assert state.termination == Termination.LIMIT_CYCLE
        assert state.delta_phi == state.best.delta_phi
        assert abs(state.delta_phi - 0.155) <= 0.01

    def test_sampled_loop_is_reproducible(self, backend):
        profile = NoiseProfile(sigma_qs=0.0)
        a = run_closed_loop(0.1, backend, profile, shots=2048, eta=0.01, max_iters=30, seed=9)
        b = run_closed_loop(0.1, backend, profile, shots=2048, eta=0.01, max_iters=30, seed=9)
        assert a == b

    def test_state_round_trip(self, backend):
        state = run_closed_loop(0.1, backend, biased(0.15), shots=0, eta=0.01, max_iters=40,
                                seed=1)
        assert ControllerState.from_dict(state.to_dict()) == state


class TestCalibration:
    def test_grid(self):
        grid = offset_grid(-0.3, 0.3, 0.005)
        assert len(grid) == 121
        assert grid[0] == -0.3 and grid[-1] == 0.3
        assert 0.15 in grid and 0.0 in grid

    def test_finds_bias(self, backend):
        result = calibrate_offset(PHI_SET, backend, biased(0.15), shots=0)
        assert result.delta_phi_star == pytest.approx(0.150, abs=0.005)

    def test_unbiased_channel(self, backend):
        result = calibrate_offset(PHI_SET, backend, biased(0.0), shots=0)
        assert result.delta_phi_star == 0.0

    def test_symmetry(self, backend):
        plus = calibrate_offset(PHI_SET, backend, biased(0.15), shots=0)
        minus = calibrate_offset(PHI_SET, backend, biased(-0.15), shots=0)
        assert minus.delta_phi_star == -plus.delta_phi_star

    def test_default_profile_with_readout(self, backend):
        result = calibrate_offset(PHI_SET, backend, NoiseProfile(), shots=0)
        assert result.delta_phi_star == pytest.approx(0.15, abs=1e-12)

    def test_decayed_probe_overshoots_bias(self, backend):
        # with contrast below 1 the objective rewards phase beyond the bias
        result = calibrate_offset(PHI_SET, backend, NoiseProfile(), shots=0,
                                  idle_duration=DEFAULT_IDLE_NS)
        assert result.delta_phi_star > 0.2

    def test_curves_and_round_trip(self, backend):
        result = calibrate_offset(PHI_SET, backend, biased(0.15), shots=0)
        assert set(result.per_phi_curves) == set(PHI_SET)
        assert all(len(c) == len(result.grid) for c in result.per_phi_curves.values())
        assert CalibrationResult.from_dict(result.to_dict()) == result
