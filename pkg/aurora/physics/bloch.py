"""Exact single-qubit Bloch-vector arithmetic.

Rotations follow the right-hand rule about the named positive axis, so
``Rx(phi)`` takes ``(0, 0, 1)`` to ``(0, -sin phi, cos phi)`` and the
measured ``<Z>`` of a prepared state equals ``cos phi``.

Free evolution is the closed-form two-channel model: transverse components
precess about Z at the detuning and shrink by ``exp(-t/T2)``; the
longitudinal component relaxes toward the ground state ``z = +1`` as
``z(t) = 1 + (z(0) - 1) exp(-t/T1)``. Times are in microseconds and
detunings in rad/us.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from aurora.errors import InvalidArgumentError

PHYSICALITY_TOL = 1e-12


class Axis(str, Enum):
    X = "X"
    Y = "Y"
    Z = "Z"


@dataclass(frozen=True)
class BlochVector:
    """Single-qubit state as its real Bloch vector."""

    x: float
    y: float
    z: float

    def __post_init__(self):
        if not all(math.isfinite(v) for v in (self.x, self.y, self.z)):
            raise InvalidArgumentError(f"non-finite Bloch vector ({self.x}, {self.y}, {self.z})")
        if self.norm_squared() > 1.0 + PHYSICALITY_TOL:
            raise InvalidArgumentError(
                f"unphysical Bloch vector ({self.x}, {self.y}, {self.z}): "
                f"|r|^2 = {self.norm_squared():.15g}"
            )

    @classmethod
    def ground(cls) -> BlochVector:
        return cls(0.0, 0.0, 1.0)

    @classmethod
    def from_array(cls, arr: np.ndarray) -> BlochVector:
        return cls(float(arr[0]), float(arr[1]), float(arr[2]))

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z], dtype=float)

    def norm_squared(self) -> float:
        return self.x * self.x + self.y * self.y + self.z * self.z

    def norm(self) -> float:
        return math.sqrt(self.norm_squared())


@dataclass(frozen=True)
class RelaxationTimes:
    """T1/T2 pair in microseconds. ``math.inf`` switches a channel off."""

    t1: float
    t2: float

    def __post_init__(self):
        for name, value in (("t1", self.t1), ("t2", self.t2)):
            if math.isnan(value) or value <= 0:
                raise InvalidArgumentError(f"{name} must be > 0 us, got {value}")
        if self.t2 > 2.0 * self.t1:
            raise InvalidArgumentError(
                f"t2 = {self.t2} us exceeds the physical bound 2*t1 = {2.0 * self.t1} us"
            )

    @classmethod
    def infinite(cls) -> RelaxationTimes:
        return cls(math.inf, math.inf)

    def scaled(self, factor: float) -> RelaxationTimes:
        """Scale both Markovian rates by ``factor`` (``0`` gives the noiseless limit)."""
        if factor < 0 or not math.isfinite(factor):
            raise InvalidArgumentError(f"noise scale must be finite and >= 0, got {factor}")
        if factor == 0:
            return RelaxationTimes.infinite()
        return RelaxationTimes(self.t1 / factor, self.t2 / factor)


def rotation_matrix(axis: Axis, angle: float) -> np.ndarray:
    c, s = math.cos(angle), math.sin(angle)
    if axis is Axis.X:
        return np.array([[1.0, 0.0, 0.0], [0.0, c, -s], [0.0, s, c]])
    if axis is Axis.Y:
        return np.array([[c, 0.0, s], [0.0, 1.0, 0.0], [-s, 0.0, c]])
    return np.array([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])


def apply_rotation(state: BlochVector, axis: Axis | str, angle: float) -> BlochVector:
    """Rotate ``state`` by ``angle`` radians about ``axis`` (right-hand rule)."""
    if not math.isfinite(angle):
        raise InvalidArgumentError(f"rotation angle must be finite, got {angle}")
    axis = Axis(axis)
    return BlochVector.from_array(rotation_matrix(axis, angle) @ state.as_array())


def _decay(duration: float, time_constant: float) -> float:
    if math.isinf(time_constant):
        return 1.0
    return math.exp(-duration / time_constant)


def free_evolution(
    state: BlochVector,
    duration: float,
    rt: RelaxationTimes,
    detuning: float = 0.0,
) -> BlochVector:
    """Evolve ``state`` for ``duration`` us under T1/T2 decay and a fixed detuning.

    Precession and transverse decay commute, so the step is applied in
    closed form rather than integrated.
    """
    if math.isnan(duration) or duration < 0:
        raise InvalidArgumentError(f"duration must be >= 0 us, got {duration}")
    if not math.isfinite(detuning):
        raise InvalidArgumentError(f"detuning must be finite, got {detuning}")
    if duration == 0:
        return state

    e2 = _decay(duration, rt.t2)
    e1 = _decay(duration, rt.t1)
    if e2 == 0.0:
        # fully dephased: the precession phase no longer matters
        x = y = 0.0
    elif detuning == 0.0:
        x, y = e2 * state.x, e2 * state.y
    elif math.isinf(duration):
        raise InvalidArgumentError(
            "precession phase is undefined for an infinite duration without T2 decay"
        )
    else:
        theta = detuning * duration
        c, s = math.cos(theta), math.sin(theta)
        x = e2 * (c * state.x - s * state.y)
        y = e2 * (s * state.x + c * state.y)
    z = 1.0 + (state.z - 1.0) * e1
    return BlochVector(x, y, z)


def z_expectation(state: BlochVector) -> float:
    return state.z
