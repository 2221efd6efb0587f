"""Timed circuit templates for the five mitigation conditions.

Every template is realized in the Ramsey frame so that the ideal readout is
``cos(phi)`` while idle dephasing can drive it toward zero:

    Rx(pi/2) -> Rz(phi) -> [idle | XY8(reps)] -> [Rz(-delta_phi)] -> Rx(-pi/2) -> measure

Pulses are instantaneous; all idle time lives in delay events. Times are
kept as integer ticks of ``dt`` internally and exposed in nanoseconds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

from aurora.errors import InvalidArgumentError, ScheduleInfeasibleError
from aurora.physics.bloch import Axis

XY8_BLOCK = (Axis.X, Axis.Y, Axis.X, Axis.Y, Axis.Y, Axis.X, Axis.Y, Axis.X)

DEFAULT_DT_NS = 0.5
DEFAULT_IDLE_NS = 60_000.0
DEFAULT_DD_REPS = 12


class MitigationCondition(str, Enum):
    BASELINE = "Baseline"
    DD_ONLY = "DDOnly"
    DELTA_PHI_ONLY = "DeltaPhiOnly"
    AURORA_DD = "AuroraDD"
    AURORA_DD_ZNE = "AuroraDDZNE"

    @property
    def uses_dd(self) -> bool:
        return self in (
            MitigationCondition.DD_ONLY,
            MitigationCondition.AURORA_DD,
            MitigationCondition.AURORA_DD_ZNE,
        )

    @property
    def uses_compensation(self) -> bool:
        return self in (
            MitigationCondition.DELTA_PHI_ONLY,
            MitigationCondition.AURORA_DD,
            MitigationCondition.AURORA_DD_ZNE,
        )

    @property
    def uses_zne(self) -> bool:
        return self is MitigationCondition.AURORA_DD_ZNE


class EventKind(str, Enum):
    ROTATION = "rotation"
    DELAY = "delay"
    MEASURE = "measure"


@dataclass(frozen=True)
class PulseEvent:
    kind: EventKind
    start: float  # ns
    duration: float  # ns
    axis: Axis | None = None
    angle: float = 0.0
    label: str = ""

    def to_dict(self) -> dict:
        d = {
            "kind": self.kind.value,
            "start": self.start,
            "duration": self.duration,
            "label": self.label,
        }
        if self.kind is EventKind.ROTATION:
            d["axis"] = self.axis.value
            d["angle"] = self.angle
        return d

    @classmethod
    def from_dict(cls, d: dict) -> PulseEvent:
        axis = d.get("axis")
        return cls(
            kind=EventKind(d["kind"]),
            start=float(d["start"]),
            duration=float(d["duration"]),
            axis=Axis(axis) if axis is not None else None,
            angle=float(d.get("angle", 0.0)),
            label=d["label"],
        )


@dataclass(frozen=True)
class CircuitTemplate:
    phi: float
    delta_phi: float
    condition: MitigationCondition
    events: tuple[PulseEvent, ...] = field(default_factory=tuple)
    total_duration: float = 0.0  # ns
    dt: float = DEFAULT_DT_NS

    @property
    def pi_pulses(self) -> list[PulseEvent]:
        return [e for e in self.events if e.label == "dd"]

    @property
    def compensation(self) -> PulseEvent | None:
        return next((e for e in self.events if e.label == "compensate"), None)

    def validate(self) -> None:
        """Check time ordering, non-overlap and dt alignment."""
        cursor = 0.0
        for ev in self.events:
            for value in (ev.start, ev.duration):
                ticks = value / self.dt
                if value < 0 or abs(ticks - round(ticks)) > 1e-9:
                    raise InvalidArgumentError(
                        f"event {ev.label!r} at {ev.start} ns is not aligned to dt={self.dt} ns"
                    )
            if ev.start < cursor - 1e-9:
                raise InvalidArgumentError(
                    f"event {ev.label!r} at {ev.start} ns overlaps the previous event"
                )
            cursor = ev.start + ev.duration

    def to_dict(self) -> dict:
        return {
            "phi": self.phi,
            "delta_phi": self.delta_phi,
            "condition": self.condition.value,
            "total_duration": self.total_duration,
            "dt": self.dt,
            "events": [e.to_dict() for e in self.events],
        }

    @classmethod
    def from_dict(cls, d: dict) -> CircuitTemplate:
        return cls(
            phi=float(d["phi"]),
            delta_phi=float(d["delta_phi"]),
            condition=MitigationCondition(d["condition"]),
            events=tuple(PulseEvent.from_dict(e) for e in d["events"]),
            total_duration=float(d["total_duration"]),
            dt=float(d["dt"]),
        )


def _ticks(duration_ns: float, dt: float) -> int:
    return int(round(duration_ns / dt))


def _xy8_gap_ticks(reps: int, total_ticks: int) -> list[int]:
    """Gap lengths (in ticks) around 8*reps instantaneous pulses.

    The alternating-sign sum of the gaps is exactly zero, which is what makes
    the window refocus any constant detuning. Leftover ticks go to the gaps
    that enter with a negative sign, two ticks per gap pair, so the span is
    within one tick of ``total_ticks``.
    """
    n_pulses = 8 * reps
    full = total_ticks // n_pulses
    if full < 2:
        raise ScheduleInfeasibleError(
            f"idle of {total_ticks} ticks cannot hold {n_pulses} pulses "
            f"(needs at least {2 * n_pulses} ticks)"
        )
    extra = (total_ticks - n_pulses * full) // 2
    gaps = [full] * (n_pulses + 1)
    # odd gaps enter the echo with a negative sign
    for k in range(extra):
        gaps[2 * k + 1] += 1
    halves = full + extra
    gaps[0] = halves // 2
    gaps[-1] = halves - halves // 2
    return gaps


def xy8_schedule(reps: int, idle_duration: float, dt: float = DEFAULT_DT_NS) -> list[PulseEvent]:
    """XY8(reps) window: 8*reps pi-pulses, equal spacing, half-gaps at the ends."""
    if reps < 1:
        raise InvalidArgumentError(f"reps must be >= 1, got {reps}")
    if not dt > 0:
        raise InvalidArgumentError(f"dt must be > 0 ns, got {dt}")
    if math.isnan(idle_duration) or idle_duration < 0:
        raise InvalidArgumentError(f"idle_duration must be >= 0 ns, got {idle_duration}")

    gaps = _xy8_gap_ticks(reps, _ticks(idle_duration, dt))
    axes = XY8_BLOCK * reps

    events: list[PulseEvent] = []
    cursor = 0
    for i, gap in enumerate(gaps):
        if gap:
            events.append(PulseEvent(EventKind.DELAY, cursor * dt, gap * dt, label="dd-gap"))
        cursor += gap
        if i < len(axes):
            events.append(
                PulseEvent(EventKind.ROTATION, cursor * dt, 0.0, axis=axes[i], angle=math.pi,
                           label="dd")
            )
    return events


def build_circuit(
    phi: float,
    delta_phi: float,
    condition: MitigationCondition | str,
    idle_duration: float = DEFAULT_IDLE_NS,
    dd_reps: int = DEFAULT_DD_REPS,
    dt: float = DEFAULT_DT_NS,
) -> CircuitTemplate:
    """Build the template for one (phi, condition) instance.

    ``delta_phi`` is recorded only when the condition compensates; the
    compensation rotation is ``Rz(-delta_phi)``.
    """
    condition = MitigationCondition(condition)
    if not math.isfinite(phi):
        raise InvalidArgumentError(f"phi must be finite, got {phi}")
    if not math.isfinite(delta_phi):
        raise InvalidArgumentError(f"delta_phi must be finite, got {delta_phi}")
    if math.isnan(idle_duration) or idle_duration < 0:
        raise InvalidArgumentError(f"idle_duration must be >= 0 ns, got {idle_duration}")
    if not dt > 0:
        raise InvalidArgumentError(f"dt must be > 0 ns, got {dt}")

    events = [
        PulseEvent(EventKind.ROTATION, 0.0, 0.0, Axis.X, math.pi / 2, label="prepare"),
        PulseEvent(EventKind.ROTATION, 0.0, 0.0, Axis.Z, phi, label="encode"),
    ]

    if condition.uses_dd:
        window = xy8_schedule(dd_reps, idle_duration, dt)
    else:
        idle_ticks = _ticks(idle_duration, dt)
        window = (
            [PulseEvent(EventKind.DELAY, 0.0, idle_ticks * dt, label="idle")] if idle_ticks else []
        )
    events.extend(window)
    end = max((e.start + e.duration for e in window), default=0.0)

    applied = delta_phi if condition.uses_compensation else 0.0
    if condition.uses_compensation:
        events.append(
            PulseEvent(EventKind.ROTATION, end, 0.0, Axis.Z, -delta_phi, label="compensate")
        )
    events.append(PulseEvent(EventKind.ROTATION, end, 0.0, Axis.X, -math.pi / 2, label="unprepare"))
    events.append(PulseEvent(EventKind.MEASURE, end, 0.0, label="measure"))

    template = CircuitTemplate(
        phi=phi,
        delta_phi=applied,
        condition=condition,
        events=tuple(events),
        total_duration=end,
        dt=dt,
    )
    template.validate()
    return template


def total_idle(template: CircuitTemplate) -> float:
    """Idle time in ns: every delay, including the gaps inside a DD window."""
    return sum(e.duration for e in template.events if e.kind is EventKind.DELAY)
