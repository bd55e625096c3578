"""JSON run configuration for the command-line tools."""
from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .lindblad import DEFAULT_DT, initial_state
from .rates import CouplingKind, PhysicalParams
from .scenarios import CHANNELS, SweepSpec


class ConfigError(ValueError):
    pass


def _expand_grid(value, name):
    """A grid is either an explicit list or ``{"start", "stop", "num"[, "endpoint"]}``."""
    if value is None:
        return None
    if isinstance(value, dict):
        extra = set(value) - {"start", "stop", "num", "endpoint"}
        if extra:
            raise ConfigError(f"{name}: unknown keys {sorted(extra)}")
        try:
            return np.linspace(
                float(value["start"]),
                float(value["stop"]),
                int(value["num"]),
                endpoint=bool(value.get("endpoint", True)),
            )
        except KeyError as exc:
            raise ConfigError(f"{name}: missing key {exc}") from None
    arr = np.asarray(value, dtype=float)
    if arr.ndim != 1 or arr.size == 0:
        raise ConfigError(f"{name} must be a non-empty list or a linspace object")
    return arr


def _parse_initial(value):
    if isinstance(value, str):
        return value
    amps = []
    for a in value:
        if isinstance(a, (list, tuple)):
            if len(a) != 2:
                raise ConfigError("complex amplitudes are written as [re, im]")
            amps.append(complex(float(a[0]), float(a[1])))
        else:
            amps.append(complex(float(a)))
    return amps


@dataclass
class RunConfig:
    kind: str
    initial: str | list = "eg"
    theta0: float | None = None
    theta_grid: list | dict | None = None
    t_max: float = 10.0
    n_t: int = 1001
    t_grid: list | dict | None = None
    delta: float = 0.0
    delta_grid: list | dict | None = None
    channels: list = field(default_factory=lambda: ["concurrence"])
    gamma: float = 1.0
    gamma_nr: float = 0.0
    gamma_phi: float = 0.0
    dt: float = DEFAULT_DT
    output: str | None = None
    seed: int | None = None
    pi_units: bool = False

    @classmethod
    def from_dict(cls, data: dict) -> "RunConfig":
        if not isinstance(data, dict):
            raise ConfigError("configuration must be a JSON object")
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"unknown configuration keys: {sorted(unknown)}")
        if "kind" not in data:
            raise ConfigError("configuration needs a 'kind'")
        try:
            cfg = cls(**data)
            cfg.validate()
        except ConfigError:
            raise
        except (TypeError, ValueError) as exc:
            raise ConfigError(str(exc)) from None
        return cfg

    @classmethod
    def from_file(cls, path: str | Path) -> "RunConfig":
        text = Path(path).read_text(encoding="utf-8")
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}: invalid JSON ({exc})") from None
        return cls.from_dict(data)

    def validate(self) -> None:
        CouplingKind.parse(self.kind)
        initial_state(_parse_initial(self.initial))
        PhysicalParams(
            float(self.theta0 or 0.0), self.gamma, self.delta, self.gamma_nr, self.gamma_phi
        )
        if self.t_grid is None and (self.t_max <= 0 or int(self.n_t) < 2):
            raise ConfigError("t_max must be > 0 and n_t >= 2")
        if not self.dt > 0:
            raise ConfigError("dt must be positive")
        bad = set(self.channels) - set(CHANNELS)
        if bad:
            raise ConfigError(f"unknown channels {sorted(bad)}; expected a subset of {CHANNELS}")
        for name in ("theta_grid", "t_grid", "delta_grid"):
            _expand_grid(getattr(self, name), name)

    @property
    def coupling(self) -> CouplingKind:
        return CouplingKind.parse(self.kind)

    @property
    def initial_state_spec(self):
        return _parse_initial(self.initial)

    def _theta(self, x):
        return x * np.pi if self.pi_units else x

    def theta_values(self) -> np.ndarray:
        if self.theta_grid is not None:
            return self._theta(_expand_grid(self.theta_grid, "theta_grid"))
        if self.theta0 is not None:
            return np.array([self._theta(float(self.theta0))])
        raise ConfigError("configuration needs 'theta0' or 'theta_grid'")

    def t_values(self) -> np.ndarray:
        if self.t_grid is not None:
            return _expand_grid(self.t_grid, "t_grid")
        return np.linspace(0.0, float(self.t_max), int(self.n_t))

    def delta_values(self) -> np.ndarray | None:
        return _expand_grid(self.delta_grid, "delta_grid")

    def params(self, theta0: float) -> PhysicalParams:
        return PhysicalParams(theta0, self.gamma, self.delta, self.gamma_nr, self.gamma_phi)

    def to_sweep_spec(self) -> SweepSpec:
        return SweepSpec(
            kind=self.coupling,
            initial=self.initial_state_spec,
            theta_grid=self.theta_values(),
            t_grid=self.t_values(),
            delta=self.delta,
            delta_grid=self.delta_values(),
            channels=tuple(self.channels),
            gamma=self.gamma,
            gamma_nr=self.gamma_nr,
            gamma_phi=self.gamma_phi,
        )

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)
