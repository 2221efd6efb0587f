"""Noisy single-qubit emulator behind a swappable backend boundary.

Noise is decomposed into four separately testable mechanisms:

- Markovian T1 amplitude damping and T2 dephasing, applied during every delay;
- a per-trial quasi-static detuning, drawn once per execution and refocused
  by the XY8 window;
- a systematic phase bias ``eps_sys`` added to the encoded phase, which DD
  cannot refocus;
- a 2x2 readout confusion matrix applied to the sampled outcomes.

``lam`` scales the Markovian rates and the quasi-static spread linearly.
"""

from __future__ import annotations

import logging
import math
from abc import ABC, abstractmethod
from dataclasses import dataclass, field, replace

import numpy as np

from aurora.errors import InvalidArgumentError
from aurora.physics.bloch import (
    Axis,
    BlochVector,
    RelaxationTimes,
    apply_rotation,
    free_evolution,
    z_expectation,
)
from aurora.physics.schedule import DEFAULT_DT_NS, CircuitTemplate, EventKind

logger = logging.getLogger(__name__)

EXPECTATION_SHOTS = 0
ROW_SUM_TOL = 1e-12
Z_RANGE_TOL = 1e-9

Confusion = tuple[tuple[float, float], tuple[float, float]]
IDENTITY_READOUT: Confusion = ((1.0, 0.0), (0.0, 1.0))


def symmetric_readout(p01: float, p10: float | None = None) -> Confusion:
    """Confusion matrix from flip probabilities p(1|0) and p(0|1)."""
    p10 = p01 if p10 is None else p10
    return ((1.0 - p01, p01), (p10, 1.0 - p10))


def validate_confusion(readout: Confusion) -> None:
    arr = np.asarray(readout, dtype=float)
    if arr.shape != (2, 2):
        raise InvalidArgumentError(f"readout confusion must be 2x2, got shape {arr.shape}")
    if np.any(arr < 0) or np.any(arr > 1):
        raise InvalidArgumentError(f"readout entries must lie in [0, 1]: {readout}")
    if np.any(np.abs(arr.sum(axis=1) - 1.0) > ROW_SUM_TOL):
        raise InvalidArgumentError(f"readout rows must sum to 1: {readout}")


@dataclass(frozen=True)
class NoiseProfile:
    rt: RelaxationTimes = field(default_factory=lambda: RelaxationTimes(155.3, 110.3))
    dt: float = DEFAULT_DT_NS
    eps_sys: float = 0.15  # rad
    sigma_qs: float = 0.1  # rad/us
    readout: Confusion = field(default_factory=lambda: symmetric_readout(0.01))
    lam: float = 1.0

    def __post_init__(self):
        if not self.dt > 0:
            raise InvalidArgumentError(f"dt must be > 0 ns, got {self.dt}")
        if not math.isfinite(self.eps_sys):
            raise InvalidArgumentError(f"eps_sys must be finite, got {self.eps_sys}")
        if not (math.isfinite(self.sigma_qs) and self.sigma_qs >= 0):
            raise InvalidArgumentError(f"sigma_qs must be >= 0, got {self.sigma_qs}")
        if not (math.isfinite(self.lam) and self.lam >= 0):
            raise InvalidArgumentError(f"noise scale must be >= 0, got {self.lam}")
        validate_confusion(self.readout)

    @classmethod
    def noise_free(cls, dt: float = DEFAULT_DT_NS) -> NoiseProfile:
        return cls(
            rt=RelaxationTimes.infinite(),
            dt=dt,
            eps_sys=0.0,
            sigma_qs=0.0,
            readout=IDENTITY_READOUT,
        )

    @property
    def effective_rt(self) -> RelaxationTimes:
        return self.rt.scaled(self.lam)

    @property
    def effective_sigma_qs(self) -> float:
        return self.sigma_qs * self.lam

    def with_scale(self, lam: float) -> NoiseProfile:
        return replace(self, lam=lam)

    def to_dict(self) -> dict:
        return {
            "t1_us": self.rt.t1,
            "t2_us": self.rt.t2,
            "dt_ns": self.dt,
            "eps_sys_rad": self.eps_sys,
            "sigma_qs_rad_per_us": self.sigma_qs,
            "readout": [list(row) for row in self.readout],
            "noise_scale": self.lam,
        }

    @classmethod
    def from_dict(cls, d: dict) -> NoiseProfile:
        return cls(
            rt=RelaxationTimes(float(d["t1_us"]), float(d["t2_us"])),
            dt=float(d["dt_ns"]),
            eps_sys=float(d["eps_sys_rad"]),
            sigma_qs=float(d["sigma_qs_rad_per_us"]),
            readout=tuple(tuple(float(v) for v in row) for row in d["readout"]),
            lam=float(d["noise_scale"]),
        )


@dataclass(frozen=True)
class ShotCounts:
    """Outcome counts. In expectation mode both counts are 0 and ``exact_z`` is set."""

    n0: int
    n1: int
    exact_z: float | None = None

    @property
    def shots(self) -> int:
        return self.n0 + self.n1

    @property
    def is_exact(self) -> bool:
        return self.exact_z is not None

    def probabilities(self) -> tuple[float, float]:
        if self.exact_z is not None:
            p0 = (1.0 + self.exact_z) / 2.0
            return p0, 1.0 - p0
        if self.shots <= 0:
            raise InvalidArgumentError("cannot form probabilities from zero shots")
        return self.n0 / self.shots, self.n1 / self.shots


def simulate_state(
    template: CircuitTemplate,
    profile: NoiseProfile,
    qs_detuning: float = 0.0,
) -> BlochVector:
    """Walk the template timeline and return the pre-measurement Bloch vector.

    ``qs_detuning`` (rad/us) is taken as already scaled by the profile's
    noise scale.
    """
    template.validate()
    rt = profile.effective_rt
    state = BlochVector.ground()
    for ev in template.events:
        if ev.kind is EventKind.ROTATION:
            state = apply_rotation(state, ev.axis, ev.angle)
            if ev.label == "encode" and profile.eps_sys:
                state = apply_rotation(state, Axis.Z, profile.eps_sys)
        elif ev.kind is EventKind.DELAY:
            state = free_evolution(state, ev.duration / 1000.0, rt, qs_detuning)
    return state


def apply_readout(z: float, readout: Confusion) -> float:
    """Expected ``<Z>`` after the confusion matrix acts on the true outcome distribution."""
    p0 = (1.0 + z) / 2.0
    p1 = 1.0 - p0
    r0 = p0 * readout[0][0] + p1 * readout[1][0]
    r1 = p0 * readout[0][1] + p1 * readout[1][1]
    return r0 - r1


def sample_counts(z: float, shots: int, readout: Confusion, rng_seed: int) -> ShotCounts:
    """Sample ``shots`` outcomes with true p0 = (1+z)/2, then flip each through ``readout``."""
    if not math.isfinite(z) or abs(z) > 1.0 + Z_RANGE_TOL:
        raise InvalidArgumentError(f"|z| must be <= 1, got {z}")
    if shots < 1:
        raise InvalidArgumentError(f"shots must be >= 1, got {shots}")
    validate_confusion(readout)

    rng = np.random.default_rng(rng_seed)
    p0 = min(max((1.0 + z) / 2.0, 0.0), 1.0)
    true0 = int(rng.binomial(shots, p0))
    true1 = shots - true0
    flip01 = int(rng.binomial(true0, readout[0][1])) if true0 else 0
    flip10 = int(rng.binomial(true1, readout[1][0])) if true1 else 0
    n0 = true0 - flip01 + flip10
    return ShotCounts(n0=n0, n1=shots - n0)


def estimate_z(counts: ShotCounts) -> float:
    """``<Z> = p0 - p1`` from counts (or the exact value in expectation mode)."""
    if counts.exact_z is not None:
        return counts.exact_z
    if counts.shots <= 0:
        raise InvalidArgumentError("cannot estimate <Z> from zero shots")
    return (counts.n0 - counts.n1) / counts.shots


class Backend(ABC):
    """Executes a circuit template and returns outcome counts.

    Implementations must be pure functions of their arguments: no shared
    mutable state, so trials may run concurrently with derived seeds.
    """

    name: str = ""

    @abstractmethod
    def execute(
        self,
        template: CircuitTemplate,
        shots: int,
        profile: NoiseProfile,
        seed: int,
    ) -> ShotCounts:
        ...


class LocalEmulator(Backend):
    """Exact Bloch evolution plus seeded shot sampling."""

    name = "local-emulator"

    def execute(
        self,
        template: CircuitTemplate,
        shots: int,
        profile: NoiseProfile,
        seed: int,
    ) -> ShotCounts:
        if shots < 0:
            raise InvalidArgumentError(f"shots must be >= 0, got {shots}")
        rng = np.random.default_rng(seed)
        # the same standard-normal draw for every lam at a given seed
        qs = float(rng.standard_normal()) * profile.effective_sigma_qs
        sample_seed = int(rng.integers(0, 2**63 - 1))

        z = z_expectation(simulate_state(template, profile, qs))
        logger.debug(
            "execute %s phi=%.4f seed=%d qs=%.6f z=%.6f",
            template.condition.value, template.phi, seed, qs, z,
        )
        if shots == EXPECTATION_SHOTS:
            return ShotCounts(0, 0, exact_z=apply_readout(z, profile.readout))
        return sample_counts(z, shots, profile.readout, sample_seed)

    def __repr__(self) -> str:
        return f"{type(self).__name__}()"


def backend_execute(
    template: CircuitTemplate,
    shots: int,
    profile: NoiseProfile,
    trial_seed: int,
    backend: Backend | None = None,
) -> ShotCounts:
    """Run one trial on ``backend`` (the local emulator by default)."""
    return (backend or LocalEmulator()).execute(template, shots, profile, trial_seed)
