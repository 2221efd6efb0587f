"""The offset controller and the global calibration sweep."""

from aurora.control.calibration import CalibrationResult, calibrate_offset, offset_grid
from aurora.control.controller import (
    MAX_GAIN,
    ControllerState,
    HistoryEntry,
    Termination,
    ideal_z,
    objective,
    phase_error_proxy,
    run_closed_loop,
    sign_update,
)

__all__ = [
    "CalibrationResult",
    "calibrate_offset",
    "offset_grid",
    "MAX_GAIN",
    "ControllerState",
    "HistoryEntry",
    "Termination",
    "ideal_z",
    "objective",
    "phase_error_proxy",
    "run_closed_loop",
    "sign_update",
]
