"""Sign-based feedback controller for the corrective phase offset.

Each iteration measures ``<Z>`` on the calibration probe at the current
offset, forms the proxy ``dZ = cos(phi) - <Z>`` and steps the offset by
``eta * sgn(dZ)``.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field, replace

from aurora.errors import GainBoundError, InvalidArgumentError
from aurora.mitigation.readout import readout_mitigate
from aurora.physics.emulator import EXPECTATION_SHOTS, Backend, NoiseProfile
from aurora.physics.schedule import DEFAULT_DD_REPS, MitigationCondition, build_circuit
from aurora.seeds import derive_seed

logger = logging.getLogger(__name__)

MAX_GAIN = 0.02
EXPECTATION_THRESHOLD = 1e-12
LIMIT_CYCLE_WINDOW = 4


class Termination:
    CONVERGED = "converged"
    LIMIT_CYCLE = "limit_cycle"
    MAX_ITERS = "max_iters"


def ideal_z(phi: float) -> float:
    return math.cos(phi)


def phase_error_proxy(ideal: float, measured: float) -> float:
    return ideal - measured


def objective(ideal: float, measured: float) -> float:
    return phase_error_proxy(ideal, measured) ** 2


def _sgn(x: float) -> int:
    return (x > 0) - (x < 0)


@dataclass(frozen=True)
class HistoryEntry:
    """One controller step: the offset that was measured, its proxy and objective."""

    delta_phi: float
    delta_z: float
    objective: float

    def to_dict(self) -> dict:
        return {"delta_phi": self.delta_phi, "delta_z": self.delta_z, "objective": self.objective}


@dataclass(frozen=True)
class ControllerState:
    delta_phi: float
    eta: float
    iteration: int = 0
    history: tuple[HistoryEntry, ...] = field(default_factory=tuple)
    termination: str | None = None

    def __post_init__(self):
        if not math.isfinite(self.eta) or abs(self.eta) > MAX_GAIN:
            raise GainBoundError(f"|eta| must be <= {MAX_GAIN} rad, got {self.eta}")
        if not math.isfinite(self.delta_phi):
            raise InvalidArgumentError(f"delta_phi must be finite, got {self.delta_phi}")
        if len(self.history) != self.iteration:
            raise InvalidArgumentError(
                f"history holds {len(self.history)} entries at iteration {self.iteration}"
            )

    @property
    def best(self) -> HistoryEntry | None:
        """History entry with the smallest objective (earliest on ties)."""
        return min(self.history, key=lambda h: h.objective, default=None)

    def to_dict(self) -> dict:
        return {
            "delta_phi": self.delta_phi,
            "eta": self.eta,
            "iteration": self.iteration,
            "termination": self.termination,
            "history": [h.to_dict() for h in self.history],
        }

    @classmethod
    def from_dict(cls, d: dict) -> ControllerState:
        return cls(
            delta_phi=float(d["delta_phi"]),
            eta=float(d["eta"]),
            iteration=int(d["iteration"]),
            history=tuple(
                HistoryEntry(float(h["delta_phi"]), float(h["delta_z"]), float(h["objective"]))
                for h in d["history"]
            ),
            termination=d["termination"],
        )


def sign_update(state: ControllerState, delta_z: float, deadband: float = 0.0) -> ControllerState:
    """Step ``delta_phi`` by ``eta * sgn(delta_z)``.

    A proxy with magnitude below ``deadband`` (or exactly zero) holds the
    offset. The measured step is appended to the history either way.
    """
    step = 0 if abs(delta_z) < deadband else _sgn(delta_z)
    entry = HistoryEntry(state.delta_phi, delta_z, delta_z * delta_z)
    return replace(
        state,
        delta_phi=state.delta_phi + state.eta * step,
        iteration=state.iteration + 1,
        history=(*state.history, entry),
    )


def convergence_threshold(shots: int) -> float:
    """Two binomial standard errors at z=0 when sampling; 1e-12 in expectation mode."""
    if shots == EXPECTATION_SHOTS:
        return EXPECTATION_THRESHOLD
    return 2.0 / math.sqrt(shots)


def probe_condition(idle_duration: float) -> MitigationCondition:
    """The calibration probe: compensation only, plus XY8 when it idles."""
    if idle_duration > 0:
        return MitigationCondition.AURORA_DD
    return MitigationCondition.DELTA_PHI_ONLY


def measure_z(
    phi: float,
    delta_phi: float,
    backend: Backend,
    profile: NoiseProfile,
    shots: int,
    seed: int,
    idle_duration: float = 0.0,
    dd_reps: int = DEFAULT_DD_REPS,
) -> float:
    """Readout-mitigated ``<Z>`` of the calibration probe at one offset."""
    template = build_circuit(
        phi, delta_phi, probe_condition(idle_duration), idle_duration, dd_reps, profile.dt
    )
    counts = backend.execute(template, shots, profile, seed)
    return readout_mitigate(counts, profile.readout).z


def _is_limit_cycle(history: tuple[HistoryEntry, ...]) -> bool:
    if len(history) < LIMIT_CYCLE_WINDOW:
        return False
    signs = [_sgn(h.delta_z) for h in history[-LIMIT_CYCLE_WINDOW:]]
    return all(s != 0 for s in signs) and all(a == -b for a, b in zip(signs, signs[1:]))


def run_closed_loop(
    phi: float,
    backend: Backend,
    profile: NoiseProfile,
    shots: int,
    eta: float,
    max_iters: int,
    seed: int,
    *,
    delta_phi0: float = 0.0,
    idle_duration: float = 0.0,
    dd_reps: int = DEFAULT_DD_REPS,
) -> ControllerState:
    """Iterate measure, proxy and sign update until a stopping rule fires.

    Stops when ``|dZ|`` falls below :func:`convergence_threshold`, when the
    last four proxies alternate in sign (the offset then returns to the
    history entry with the lowest objective), or after ``max_iters`` steps.
    Every iteration measures with its own derived seed.
    """
    if max_iters < 1:
        raise InvalidArgumentError(f"max_iters must be >= 1, got {max_iters}")
    if shots < 0:
        raise InvalidArgumentError(f"shots must be >= 0, got {shots}")

    state = ControllerState(delta_phi=delta_phi0, eta=eta)
    threshold = convergence_threshold(shots)
    target = ideal_z(phi)

    while state.iteration < max_iters:
        z = measure_z(
            phi,
            state.delta_phi,
            backend,
            profile,
            shots,
            derive_seed(seed, "closed-loop", state.iteration),
            idle_duration,
            dd_reps,
        )
        dz = phase_error_proxy(target, z)
        state = sign_update(state, dz, deadband=threshold)
        logger.debug(
            "phi=%.4f iter=%d delta_phi=%.5f dZ=%.3e", phi, state.iteration, state.delta_phi, dz
        )

        if abs(dz) < threshold:
            return replace(state, termination=Termination.CONVERGED)
        if _is_limit_cycle(state.history):
            best = state.best.delta_phi
            return replace(state, delta_phi=best, termination=Termination.LIMIT_CYCLE)

    return replace(state, termination=Termination.MAX_ITERS)
