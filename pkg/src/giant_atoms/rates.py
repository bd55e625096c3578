"""Coupling geometries and the coefficients of the two-giant-atom master equation.

Each giant atom touches the waveguide at two points. Positions are stored in
units of the spacing ``d`` between neighbouring coupling points, so the phase
picked up between two points is ``theta0 * |x - x'|``.

All rates are returned in the same units as ``gamma``.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

TWO_PI = 2.0 * np.pi


class CouplingKind(str, enum.Enum):
    SEPARATE = "separate"
    BRAIDED = "braided"
    NESTED = "nested"

    @classmethod
    def parse(cls, value: "CouplingKind | str") -> "CouplingKind":
        if isinstance(value, cls):
            return value
        key = str(value).strip().lower()
        aliases = {"s": "separate", "b": "braided", "n": "nested"}
        key = aliases.get(key, key)
        try:
            return cls(key)
        except ValueError:
            raise ValueError(
                f"unknown coupling kind {value!r}; expected one of "
                f"{[k.value for k in cls]}"
            ) from None

    @property
    def short(self) -> str:
        return self.value[0].upper()


_POSITIONS = {
    CouplingKind.SEPARATE: ((0.0, 1.0), (2.0, 3.0)),
    CouplingKind.BRAIDED: ((0.0, 2.0), (1.0, 3.0)),
    CouplingKind.NESTED: ((0.0, 3.0), (1.0, 2.0)),
}


@dataclass(frozen=True)
class CouplingConfig:
    """Coupling-point coordinates ``(x_a1, x_a2)`` and ``(x_b1, x_b2)`` in units of d."""

    kind: CouplingKind
    atom_a: tuple[float, float]
    atom_b: tuple[float, float]

    def __post_init__(self):
        pts = (*self.atom_a, *self.atom_b)
        if len(set(pts)) != 4:
            raise ValueError(f"coupling points must be distinct, got {pts}")

    @property
    def positions(self) -> tuple[float, float, float, float]:
        return (*self.atom_a, *self.atom_b)

    def shifted(self, offset: float) -> "CouplingConfig":
        return CouplingConfig(
            self.kind,
            tuple(x + offset for x in self.atom_a),
            tuple(x + offset for x in self.atom_b),
        )


@dataclass(frozen=True)
class PhysicalParams:
    """Physical knobs of a run.

    ``gamma_nr`` adds local amplitude damping and ``gamma_phi`` pure dephasing
    on each atom; both are off by default.
    """

    theta0: float
    gamma: float = 1.0
    delta: float = 0.0
    gamma_nr: float = 0.0
    gamma_phi: float = 0.0

    def __post_init__(self):
        for name in ("theta0", "gamma", "delta", "gamma_nr", "gamma_phi"):
            if not np.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")
        if self.gamma <= 0:
            raise ValueError(f"gamma must be positive, got {self.gamma}")
        if self.gamma_nr < 0:
            raise ValueError(f"gamma_nr must be >= 0, got {self.gamma_nr}")
        if self.gamma_phi < 0:
            raise ValueError(f"gamma_phi must be >= 0, got {self.gamma_phi}")


@dataclass(frozen=True)
class DerivedRates:
    """Lamb shifts, exchange coupling and decay rates entering the master equation."""

    delta_omega_a: float
    delta_omega_b: float
    g_ab: float
    Gamma_a: float
    Gamma_b: float
    Gamma_coll: float

    def as_array(self) -> np.ndarray:
        return np.array(
            [
                self.delta_omega_a,
                self.delta_omega_b,
                self.g_ab,
                self.Gamma_a,
                self.Gamma_b,
                self.Gamma_coll,
            ]
        )

    def as_dict(self) -> dict[str, float]:
        return {name: float(v) for name, v in zip(RATE_FIELDS, self.as_array())}

    def replace(self, **changes) -> "DerivedRates":
        values = self.as_dict()
        values.update(changes)
        return DerivedRates(**values)


RATE_FIELDS = (
    "delta_omega_a",
    "delta_omega_b",
    "g_ab",
    "Gamma_a",
    "Gamma_b",
    "Gamma_coll",
)


def canonical_theta(theta0: float) -> float:
    """Reduce a phase shift to ``[0, 2*pi)``."""
    theta = float(np.mod(theta0, TWO_PI))
    # np.mod can return exactly 2*pi for tiny negative inputs
    return 0.0 if theta >= TWO_PI else theta


def coupling_geometry(kind: CouplingKind | str) -> CouplingConfig:
    kind = CouplingKind.parse(kind)
    a, b = _POSITIONS[kind]
    return CouplingConfig(kind, a, b)


def _pair_sums(xs, ys, theta):
    dist = np.abs(np.subtract.outer(np.asarray(xs, float), np.asarray(ys, float)))
    phase = theta * dist
    return np.sin(phase).sum(), np.cos(phase).sum()


def derive_rates_from_geometry(
    config: CouplingConfig, theta0: float, gamma: float = 1.0
) -> DerivedRates:
    """Evaluate the coupling-point double sums, self terms included."""
    if gamma <= 0:
        raise ValueError(f"gamma must be positive, got {gamma}")
    theta = canonical_theta(theta0)
    s_aa, c_aa = _pair_sums(config.atom_a, config.atom_a, theta)
    s_bb, c_bb = _pair_sums(config.atom_b, config.atom_b, theta)
    s_ab, c_ab = _pair_sums(config.atom_a, config.atom_b, theta)
    return DerivedRates(
        delta_omega_a=gamma * s_aa / 2,
        delta_omega_b=gamma * s_bb / 2,
        g_ab=gamma * s_ab / 2,
        Gamma_a=gamma * c_aa,
        Gamma_b=gamma * c_bb,
        Gamma_coll=gamma * c_ab,
    )


def derive_rates_closed_form(
    kind: CouplingKind | str, theta0: float, gamma: float = 1.0
) -> DerivedRates:
    """Trigonometric closed forms of the same six coefficients."""
    if gamma <= 0:
        raise ValueError(f"gamma must be positive, got {gamma}")
    kind = CouplingKind.parse(kind)
    t = canonical_theta(theta0)
    sin, cos = np.sin, np.cos
    if kind is CouplingKind.SEPARATE:
        shift = sin(t)
        da, db = shift, shift
        g = (sin(t) + 2 * sin(2 * t) + sin(3 * t)) / 2
        ga = gb = 2 * (1 + cos(t))
        gc = cos(t) + 2 * cos(2 * t) + cos(3 * t)
    elif kind is CouplingKind.BRAIDED:
        da = db = sin(2 * t)
        g = (3 * sin(t) + sin(3 * t)) / 2
        ga = gb = 2 * (1 + cos(2 * t))
        gc = 3 * cos(t) + cos(3 * t)
    else:
        da, db = sin(3 * t), sin(t)
        g = sin(t) + sin(2 * t)
        ga, gb = 2 * (1 + cos(3 * t)), 2 * (1 + cos(t))
        gc = 2 * (cos(t) + cos(2 * t))
    return DerivedRates(
        delta_omega_a=gamma * da,
        delta_omega_b=gamma * db,
        g_ab=gamma * g,
        Gamma_a=gamma * ga,
        Gamma_b=gamma * gb,
        Gamma_coll=gamma * gc,
    )


def rates_for(kind: CouplingKind | str, theta0: float, gamma: float = 1.0) -> DerivedRates:
    """Rates of one of the three standard geometries (geometry route)."""
    return derive_rates_from_geometry(coupling_geometry(kind), theta0, gamma)
