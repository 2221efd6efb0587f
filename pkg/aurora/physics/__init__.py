"""Single-qubit physics: Bloch arithmetic, circuit schedules and the noisy emulator.

- bloch: exact rotations and closed-form T1/T2 free evolution
- schedule: XY8 decoupling windows and the five-condition circuit template
- emulator: noise profile, timeline simulation, shot sampling, backend boundary
"""

from aurora.physics.bloch import (
    Axis,
    BlochVector,
    RelaxationTimes,
    apply_rotation,
    free_evolution,
    z_expectation,
)
from aurora.physics.emulator import (
    IDENTITY_READOUT,
    Backend,
    LocalEmulator,
    NoiseProfile,
    ShotCounts,
    backend_execute,
    estimate_z,
    sample_counts,
    simulate_state,
    symmetric_readout,
)
from aurora.physics.schedule import (
    CircuitTemplate,
    EventKind,
    MitigationCondition,
    PulseEvent,
    build_circuit,
    total_idle,
    xy8_schedule,
)

__all__ = [
    "Axis",
    "BlochVector",
    "RelaxationTimes",
    "apply_rotation",
    "free_evolution",
    "z_expectation",
    "IDENTITY_READOUT",
    "Backend",
    "LocalEmulator",
    "NoiseProfile",
    "ShotCounts",
    "backend_execute",
    "estimate_z",
    "sample_counts",
    "simulate_state",
    "symmetric_readout",
    "CircuitTemplate",
    "EventKind",
    "MitigationCondition",
    "PulseEvent",
    "build_circuit",
    "total_idle",
    "xy8_schedule",
]
