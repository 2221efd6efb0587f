"""Campaign configuration: a flat YAML mapping with units in the key names.

Every key is optional; missing keys take the defaults below. Unknown keys,
nested values and wrongly typed values are rejected with the offending
field and, when known, its line in the file.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass, fields
from pathlib import Path

import yaml

from aurora.control.controller import MAX_GAIN
from aurora.errors import ConfigNotFoundError, ConfigSyntaxError, ConfigValidationError
from aurora.mitigation.zne import DEFAULT_LAMBDAS
from aurora.physics.bloch import RelaxationTimes
from aurora.physics.emulator import NoiseProfile
from aurora.physics.schedule import (
    DEFAULT_DD_REPS,
    DEFAULT_DT_NS,
    DEFAULT_IDLE_NS,
    MitigationCondition,
)

DEFAULT_PHI_SET = (0.05, 0.10, 0.15, 0.20)
ALL_CONDITIONS = tuple(MitigationCondition)

INT_FIELDS = {
    "master_seed", "trials", "shots", "dd_reps", "max_iters",
    "calibration_shots", "bootstrap_resamples", "workers",
}
FLOAT_FIELDS = {
    "t1_us", "t2_us", "dt_ns", "eps_sys_rad", "sigma_qs_rad_per_us", "readout_p01",
    "readout_p10", "noise_scale", "idle_ns", "eta_rad", "delta_phi0_rad", "grid_lo_rad",
    "grid_hi_rad", "grid_step_rad", "calibration_idle_ns", "ci_level",
}
FLOAT_LIST_FIELDS = {"phi_set_rad", "zne_lambdas"}


@dataclass(frozen=True)
class CampaignConfig:
    master_seed: int = 0
    phi_set_rad: tuple[float, ...] = DEFAULT_PHI_SET
    conditions: tuple[MitigationCondition, ...] = ALL_CONDITIONS
    trials: int = 30
    shots: int = 2048
    preliminary_trial: bool = False
    # noise profile
    t1_us: float = 155.3
    t2_us: float = 110.3
    dt_ns: float = DEFAULT_DT_NS
    eps_sys_rad: float = 0.15
    sigma_qs_rad_per_us: float = 0.1
    readout_p01: float = 0.01
    readout_p10: float = 0.01
    noise_scale: float = 1.0
    # schedule
    idle_ns: float = DEFAULT_IDLE_NS
    dd_reps: int = DEFAULT_DD_REPS
    # controller and calibration
    eta_rad: float = 0.01
    max_iters: int = 40
    delta_phi0_rad: float = 0.0
    grid_lo_rad: float = -0.3
    grid_hi_rad: float = 0.3
    grid_step_rad: float = 0.005
    calibration_shots: int = 0
    calibration_idle_ns: float = 0.0
    delta_phi_star_rad: float | None = None
    # mitigation and statistics
    zne_lambdas: tuple[float, ...] = DEFAULT_LAMBDAS
    bootstrap_resamples: int = 10_000
    ci_level: float = 0.95
    # execution
    workers: int = 1
    output_dir: str = "results"

    def __post_init__(self):
        self._check_values()

    def _check_values(self) -> None:
        def fail(name: str, message: str):
            raise ConfigValidationError(message, field=name)

        for name in FLOAT_FIELDS:
            if not math.isfinite(getattr(self, name)):
                fail(name, f"{name} must be finite")
        if self.trials < 1:
            fail("trials", f"trials must be >= 1, got {self.trials}")
        if self.preliminary_trial and self.trials < 2:
            fail("trials", "a preliminary trial needs trials >= 2")
        if self.shots < 0:
            fail("shots", f"shots must be >= 0 (0 = expectation mode), got {self.shots}")
        if not self.phi_set_rad:
            fail("phi_set_rad", "phi_set_rad must be nonempty")
        if len(set(self.phi_set_rad)) != len(self.phi_set_rad):
            fail("phi_set_rad", "phi_set_rad must not repeat a phase")
        if len(set(self.conditions)) != len(self.conditions):
            fail("conditions", "conditions must not repeat")
        if self.t1_us <= 0:
            fail("t1_us", f"t1_us must be > 0, got {self.t1_us}")
        if not 0 < self.t2_us <= 2 * self.t1_us:
            fail("t2_us", f"t2_us must lie in (0, 2*t1_us], got {self.t2_us}")
        if self.dt_ns <= 0:
            fail("dt_ns", f"dt_ns must be > 0, got {self.dt_ns}")
        if self.sigma_qs_rad_per_us < 0:
            fail("sigma_qs_rad_per_us", "sigma_qs_rad_per_us must be >= 0")
        for name in ("readout_p01", "readout_p10"):
            if not 0 <= getattr(self, name) < 1:
                fail(name, f"{name} must lie in [0, 1)")
        if self.readout_p01 + self.readout_p10 >= 1:
            fail("readout_p10", "readout_p01 + readout_p10 must be < 1")
        if self.noise_scale < 0:
            fail("noise_scale", f"noise_scale must be >= 0, got {self.noise_scale}")
        if self.idle_ns < 0:
            fail("idle_ns", f"idle_ns must be >= 0, got {self.idle_ns}")
        if self.dd_reps < 1:
            fail("dd_reps", f"dd_reps must be >= 1, got {self.dd_reps}")
        if abs(self.eta_rad) > MAX_GAIN:
            fail("eta_rad", f"|eta_rad| must be <= {MAX_GAIN}, got {self.eta_rad}")
        if self.max_iters < 1:
            fail("max_iters", f"max_iters must be >= 1, got {self.max_iters}")
        if self.grid_step_rad <= 0:
            fail("grid_step_rad", f"grid_step_rad must be > 0, got {self.grid_step_rad}")
        if self.grid_hi_rad < self.grid_lo_rad:
            fail("grid_hi_rad", "grid_hi_rad must be >= grid_lo_rad")
        if self.calibration_shots < 0:
            fail("calibration_shots", "calibration_shots must be >= 0")
        if self.calibration_idle_ns < 0:
            fail("calibration_idle_ns", "calibration_idle_ns must be >= 0")
        if self.delta_phi_star_rad is not None and not math.isfinite(self.delta_phi_star_rad):
            fail("delta_phi_star_rad", "delta_phi_star_rad must be finite")
        if len(set(self.zne_lambdas)) < 2 or any(not lam > 0 for lam in self.zne_lambdas):
            fail("zne_lambdas", "zne_lambdas needs >= 2 distinct positive noise scales")
        if self.bootstrap_resamples < 100:
            fail("bootstrap_resamples", "bootstrap_resamples must be >= 100")
        if not 0 < self.ci_level < 1:
            fail("ci_level", f"ci_level must lie in (0, 1), got {self.ci_level}")
        if self.workers < 1:
            fail("workers", f"workers must be >= 1, got {self.workers}")

    @property
    def profile(self) -> NoiseProfile:
        return NoiseProfile(
            rt=RelaxationTimes(self.t1_us, self.t2_us),
            dt=self.dt_ns,
            eps_sys=self.eps_sys_rad,
            sigma_qs=self.sigma_qs_rad_per_us,
            readout=(
                (1.0 - self.readout_p01, self.readout_p01),
                (self.readout_p10, 1.0 - self.readout_p10),
            ),
            lam=self.noise_scale,
        )

    @property
    def condition_names(self) -> list[str]:
        return [c.value for c in self.conditions]

    def with_overrides(self, **overrides) -> CampaignConfig:
        """Copy with the non-None overrides applied (CLI flags)."""
        return dataclasses.replace(self, **{k: v for k, v in overrides.items() if v is not None})

    def to_dict(self) -> dict:
        d = {}
        for f in fields(self):
            value = getattr(self, f.name)
            if f.name == "conditions":
                value = [c.value for c in value]
            elif isinstance(value, tuple):
                value = list(value)
            d[f.name] = value
        return d

    @classmethod
    def from_dict(cls, data: dict) -> CampaignConfig:
        return config_from_mapping(data)


def _coerce(name: str, value):
    if name in INT_FIELDS:
        if isinstance(value, bool) or not isinstance(value, int):
            raise ConfigValidationError(f"expected an integer, got {value!r}", field=name)
        return value
    if name in FLOAT_FIELDS:
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ConfigValidationError(f"expected a number, got {value!r}", field=name)
        return float(value)
    if name in FLOAT_LIST_FIELDS:
        if not isinstance(value, list):
            raise ConfigValidationError(f"expected a list of numbers, got {value!r}", field=name)
        return tuple(_coerce_number(name, v) for v in value)
    if name == "conditions":
        if not isinstance(value, list):
            raise ConfigValidationError(f"expected a list of conditions, got {value!r}", field=name)
        try:
            return tuple(MitigationCondition(v) for v in value)
        except ValueError as e:
            valid = ", ".join(c.value for c in MitigationCondition)
            raise ConfigValidationError(f"{e}; expected one of {valid}", field=name) from None
    if name == "preliminary_trial":
        if not isinstance(value, bool):
            raise ConfigValidationError(f"expected true or false, got {value!r}", field=name)
        return value
    if name == "delta_phi_star_rad":
        return None if value is None else _coerce_number(name, value)
    if name == "output_dir":
        if not isinstance(value, str):
            raise ConfigValidationError(f"expected a path string, got {value!r}", field=name)
        return value
    raise ConfigValidationError(f"unknown key '{name}'", field=name)


def _coerce_number(name: str, value) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigValidationError(f"expected a number, got {value!r}", field=name)
    return float(value)


def config_from_mapping(data: dict, lines: dict[str, int] | None = None) -> CampaignConfig:
    """Validate a parsed mapping and apply defaults."""
    lines = lines or {}
    if not isinstance(data, dict):
        raise ConfigValidationError("top level of the config must be a key/value mapping")

    known = {f.name for f in fields(CampaignConfig)}
    values = {}
    for key, value in data.items():
        line = lines.get(key)
        if key not in known:
            raise ConfigValidationError(f"unknown key '{key}'", field=str(key), line=line)
        if isinstance(value, dict):
            raise ConfigValidationError("nested values are not allowed", field=key, line=line)
        try:
            values[key] = _coerce(key, value)
        except ConfigValidationError as e:
            raise ConfigValidationError(e.message, field=e.field, line=line) from None

    try:
        return CampaignConfig(**values)
    except ConfigValidationError as e:
        if e.field in lines and e.line is None:
            raise ConfigValidationError(e.message, field=e.field, line=lines[e.field]) from None
        raise


def _key_lines(text: str) -> dict[str, int]:
    node = yaml.compose(text, Loader=yaml.SafeLoader)
    if not isinstance(node, yaml.MappingNode):
        return {}
    return {k.value: k.start_mark.line + 1 for k, _ in node.value if isinstance(k, yaml.ScalarNode)}


def load_config(config_path: str | Path) -> dict:
    """Load the raw mapping from a YAML file."""
    path = Path(config_path)
    if not path.is_file():
        raise ConfigNotFoundError(f"config file not found: {path}")
    with open(path) as f:
        text = f.read()
    try:
        return yaml.safe_load(text) or {}
    except yaml.YAMLError as e:
        mark = getattr(e, "problem_mark", None)
        problem = getattr(e, "problem", None) or str(e)
        raise ConfigSyntaxError(
            f"malformed YAML in {path}: {problem}", line=mark.line + 1 if mark else None
        ) from None


def parse_config(config_path: str | Path) -> CampaignConfig:
    """Read, validate and default a campaign config file."""
    data = load_config(config_path)
    lines = _key_lines(Path(config_path).read_text())
    return config_from_mapping(data, lines)
