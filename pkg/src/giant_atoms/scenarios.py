"""Parameter sweeps over phase shift, time and detuning.

Every sweep cell is one master-equation evolution. Cells are integrated in
vectorized batches and, optionally, spread over worker processes; results
are always assembled in grid order so output does not depend on scheduling.
"""
from __future__ import annotations

import time as _time
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.optimize import minimize_scalar

from .collective import DegenerateBasisError, collective_basis
from .entanglement import NumericalError, concurrence
from .lindblad import (
    BASIS_LABELS,
    DEFAULT_DT,
    HERMITIAN_TOL,
    POSITIVITY_TOL,
    TRACE_TOL,
    StepSizeError,
    initial_state,
    liouvillian_matrix,
    propagate,
    rk4_propagator,
)
from .rates import CouplingKind, PhysicalParams, rates_for

CHANNELS = ("concurrence", "populations", "raw_state")
POPULATION_CHANNELS = ("rho22", "rho_pp", "rho_mm", "rho00", "re_rho_pm", "im_rho_pm")
# upper triangle of rho, diagonal included
RAW_ELEMENTS = tuple((i, j) for i in range(4) for j in range(i, 4))
RAW_CHANNELS = tuple(
    f"{part}_{BASIS_LABELS[i]}_{BASIS_LABELS[j]}" for i, j in RAW_ELEMENTS for part in ("re", "im")
)
BATCH_SIZE = 128


def _grid(values, name) -> np.ndarray:
    arr = np.atleast_1d(np.asarray(values, dtype=float))
    if arr.ndim != 1 or arr.size == 0:
        raise ValueError(f"{name} must be a non-empty 1-D grid")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} must be finite")
    if np.any(np.diff(arr) <= 0):
        raise ValueError(f"{name} must be strictly increasing")
    return arr


def initial_label(initial) -> str:
    if isinstance(initial, str):
        return initial
    return "psi(" + ";".join(repr(complex(a)) for a in np.asarray(initial).ravel()) + ")"


@dataclass
class SweepSpec:
    kind: CouplingKind | str
    initial: str | Sequence[complex]
    theta_grid: Sequence[float]
    t_grid: Sequence[float]
    delta: float = 0.0
    delta_grid: Sequence[float] | None = None
    channels: Sequence[str] = ("concurrence",)
    gamma: float = 1.0
    gamma_nr: float = 0.0
    gamma_phi: float = 0.0

    def __post_init__(self):
        self.kind = CouplingKind.parse(self.kind)
        self.theta_grid = _grid(self.theta_grid, "theta_grid")
        self.t_grid = _grid(self.t_grid, "t_grid")
        if self.t_grid[0] != 0:
            raise ValueError("t_grid must start at 0")
        if self.delta_grid is None:
            self.delta_grid = np.array([float(self.delta)])
        else:
            self.delta_grid = _grid(self.delta_grid, "delta_grid")
        unknown = set(self.channels) - set(CHANNELS)
        if unknown or not self.channels:
            raise ValueError(f"channels must be a non-empty subset of {CHANNELS}, got {self.channels}")
        self.channels = tuple(c for c in CHANNELS if c in self.channels)
        initial_state(self.initial)  # validates
        PhysicalParams(0.0, self.gamma, 0.0, self.gamma_nr, self.gamma_phi)

    @property
    def shape(self) -> tuple[int, int, int]:
        return (self.theta_grid.size, self.delta_grid.size, self.t_grid.size)

    def channel_names(self) -> list[str]:
        names = []
        if "concurrence" in self.channels:
            names.append("concurrence")
        if "populations" in self.channels:
            names.extend(POPULATION_CHANNELS)
        if "raw_state" in self.channels:
            names.extend(RAW_CHANNELS)
        return names

    def cells(self) -> list[tuple[int, int, float, float]]:
        return [
            (i, j, float(th), float(de))
            for i, th in enumerate(self.theta_grid)
            for j, de in enumerate(self.delta_grid)
        ]

    def params(self, theta0: float, delta: float) -> PhysicalParams:
        return PhysicalParams(theta0, self.gamma, delta, self.gamma_nr, self.gamma_phi)

    def to_dict(self) -> dict:
        return {
            "kind": self.kind.value,
            "initial": initial_label(self.initial),
            "theta_grid": [float(x) for x in self.theta_grid],
            "t_grid": [float(x) for x in self.t_grid],
            "delta_grid": [float(x) for x in self.delta_grid],
            "channels": list(self.channels),
            "gamma": self.gamma,
            "gamma_nr": self.gamma_nr,
            "gamma_phi": self.gamma_phi,
        }


@dataclass
class SweepResult:
    spec: SweepSpec
    values: dict[str, np.ndarray]
    errors: dict[tuple[int, int], str] = field(default_factory=dict)
    metadata: dict = field(default_factory=dict)

    def channel(self, name: str, delta_index: int = 0) -> np.ndarray:
        """Array of shape ``(n_theta, n_t)`` for one channel at one detuning."""
        return self.values[name][:, delta_index, :]

    def row(self, theta0: float, name: str = "concurrence", delta_index: int = 0) -> np.ndarray:
        i = int(np.argmin(np.abs(self.spec.theta_grid - theta0)))
        return self.values[name][i, delta_index]


def _channel_values(spec: SweepSpec, states: np.ndarray, bases) -> dict[str, np.ndarray]:
    # states: (B, 4, 4) at one time; bases: per-cell unitary or None
    out = {}
    if "concurrence" in spec.channels:
        out["concurrence"] = concurrence(states)
    if "populations" in spec.channels:
        coll = np.full(states.shape, np.nan, dtype=complex)
        for b, u in enumerate(bases):
            if u is not None:
                coll[b] = u.conj().T @ states[b] @ u
        out["rho22"] = coll[:, 0, 0].real
        out["rho_pp"] = coll[:, 1, 1].real
        out["rho_mm"] = coll[:, 2, 2].real
        out["rho00"] = coll[:, 3, 3].real
        out["re_rho_pm"] = coll[:, 1, 2].real
        out["im_rho_pm"] = coll[:, 1, 2].imag
    if "raw_state" in spec.channels:
        for (i, j) in RAW_ELEMENTS:
            la, lb = BASIS_LABELS[i], BASIS_LABELS[j]
            out[f"re_{la}_{lb}"] = states[:, i, j].real
            out[f"im_{la}_{lb}"] = states[:, i, j].imag
    return out


def _run_cells(spec: SweepSpec, cells, dt: float):
    """Integrate a batch of cells; returns per-channel arrays ``(B, T)`` and errors."""
    names = spec.channel_names()
    n_t = spec.t_grid.size
    values = {name: np.full((len(cells), n_t), np.nan) for name in names}
    errors: dict[int, str] = {}
    rho0 = initial_state(spec.initial)

    sups, bases = [], []
    for b, (_, _, th, de) in enumerate(cells):
        rates = rates_for(spec.kind, th, spec.gamma)
        sups.append(liouvillian_matrix(rates, spec.params(th, de)))
        u = None
        if "populations" in spec.channels:
            try:
                u = collective_basis(rates, de).unitary()
            except DegenerateBasisError as exc:
                errors[b] = f"{type(exc).__name__}: {exc}"
        bases.append(u)
    sups = np.array(sups)
    initials = np.broadcast_to(rho0, (len(cells), 4, 4))
    try:
        for k, states in propagate(initials, sups, spec.t_grid, dt):
            try:
                chans = _channel_values(spec, states, bases)
            except NumericalError:
                if len(cells) == 1:
                    raise
                raise _SplitBatch from None
            for name, v in chans.items():
                values[name][:, k] = v
    except (_SplitBatch, StepSizeError, NumericalError) as exc:
        if len(cells) > 1:
            # redo one cell at a time so the failure is pinned to its cell
            for b, cell in enumerate(cells):
                sub_vals, sub_err = _run_cells(spec, [cell], dt)
                for name in names:
                    values[name][b] = sub_vals[name][0]
                if 0 in sub_err:
                    errors[b] = sub_err[0]
        else:
            for name in names:
                values[name][0] = np.nan
            errors[0] = f"{type(exc).__name__}: {exc}"
    return values, errors


class _SplitBatch(Exception):
    pass


def _run_chunk(args):
    spec, cells, dt = args
    return _run_cells(spec, cells, dt)


def run_sweep(
    spec: SweepSpec, dt: float = DEFAULT_DT, jobs: int = 1, batch_size: int = BATCH_SIZE
) -> SweepResult:
    """One evolution per (theta0, delta) cell, channels sampled on ``spec.t_grid``.

    Failures (degenerate collective basis, unstable step, bad spectrum) are
    recorded per cell in ``result.errors`` and the affected values left NaN.
    """
    start = _time.perf_counter()
    cells = spec.cells()
    chunks = [cells[i : i + batch_size] for i in range(0, len(cells), batch_size)]
    if jobs > 1 and len(chunks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            outputs = list(pool.map(_run_chunk, [(spec, c, dt) for c in chunks]))
    else:
        outputs = [_run_cells(spec, c, dt) for c in chunks]

    n_th, n_de, n_t = spec.shape
    values = {name: np.empty((n_th, n_de, n_t)) for name in spec.channel_names()}
    errors = {}
    for chunk, (vals, errs) in zip(chunks, outputs):
        for b, (i, j, _, _) in enumerate(chunk):
            for name in values:
                values[name][i, j] = vals[name][b]
            if b in errs:
                errors[(i, j)] = errs[b]
    meta = {
        "dt": dt,
        "tolerances": {
            "hermiticity": HERMITIAN_TOL,
            "trace": TRACE_TOL,
            "positivity": POSITIVITY_TOL,
        },
        "n_cells": len(cells),
        "n_errors": len(errors),
        "jobs": jobs,
        "wall_time_s": _time.perf_counter() - start,
    }
    return SweepResult(spec, values, errors, meta)


@dataclass
class PhaseCut:
    theta_grid: np.ndarray
    t_values: np.ndarray
    curves: np.ndarray  # (n_t_values, n_theta)

    def curve(self, t: float) -> np.ndarray:
        return self.curves[int(np.argmin(np.abs(self.t_values - t)))]


def phase_cut(
    kind,
    initial,
    t_values: Sequence[float],
    theta_grid: Sequence[float],
    delta: float = 0.0,
    dt: float = DEFAULT_DT,
    jobs: int = 1,
    gamma: float = 1.0,
) -> PhaseCut:
    """Concurrence against phase shift at fixed times."""
    t_values = np.unique(np.asarray(t_values, dtype=float))
    if np.any(t_values < 0):
        raise ValueError("t_values must be nonnegative")
    t_grid = t_values if t_values[0] == 0 else np.concatenate([[0.0], t_values])
    spec = SweepSpec(kind, initial, theta_grid, t_grid, delta=delta, gamma=gamma)
    res = run_sweep(spec, dt=dt, jobs=jobs)
    c = res.channel("concurrence")
    idx = np.searchsorted(t_grid, t_values)
    return PhaseCut(spec.theta_grid, t_values, c[:, idx].T)


@dataclass
class DetuningScan:
    delta_grid: np.ndarray
    c_max: np.ndarray
    t_at_max: np.ndarray
    at_boundary: np.ndarray


def _step(prop, v):
    m = (prop @ v).reshape(4, 4)
    return (0.5 * (m + m.conj().T)).reshape(16)


def _concurrence_at(sup, prop_dt, rho, tau, dt):
    # whole steps with the shared propagator, then one shorter step
    v = rho.reshape(16)
    n = int(tau // dt)
    for _ in range(n):
        v = _step(prop_dt, v)
    rest = tau - n * dt
    if rest > 1e-12 * dt:
        v = _step(rk4_propagator(sup, rest), v)
    return concurrence(v.reshape(4, 4))


def max_concurrence_vs_detuning(
    kind,
    initial,
    theta0: float,
    delta_grid: Sequence[float],
    horizon: float = 100.0,
    sample_dt: float = 0.02,
    dt: float = DEFAULT_DT,
    gamma: float = 1.0,
) -> DetuningScan:
    """Largest concurrence over ``[0, horizon]`` for each detuning.

    The maximum over a sample grid is refined by golden-section search in the
    two sample intervals around the grid argmax.
    """
    if horizon <= 0:
        raise ValueError("horizon must be positive")
    kind = CouplingKind.parse(kind)
    deltas = _grid(delta_grid, "delta_grid")
    n_samples = max(2, int(np.ceil(horizon / sample_dt)) + 1)
    t = np.linspace(0.0, horizon, n_samples)
    rates = rates_for(kind, theta0, gamma)
    sups = np.array([liouvillian_matrix(rates, PhysicalParams(theta0, gamma, d)) for d in deltas])
    rho0 = initial_state(initial)
    n = deltas.size

    best = np.full(n, -1.0)
    best_k = np.zeros(n, dtype=int)
    left_state = np.broadcast_to(rho0, (n, 4, 4)).copy()  # state one sample before argmax
    prev_states = left_state.copy()
    for k, states in propagate(np.broadcast_to(rho0, (n, 4, 4)), sups, t, dt):
        c = concurrence(states)
        better = c > best
        best[better] = c[better]
        best_k[better] = k
        left_state[better] = prev_states[better] if k > 0 else states[better]
        prev_states = states

    props = rk4_propagator(sups, dt)
    c_max = best.copy()
    t_max = t[best_k]
    at_boundary = best_k == n_samples - 1
    for b in range(n):
        k = best_k[b]
        if best[b] <= 0 or k == 0 or k == n_samples - 1:
            continue
        lo = t[k - 1]
        hi = t[k + 1]
        rho_lo = left_state[b]

        def neg_c(tt, b=b, lo=lo, rho_lo=rho_lo):
            return -_concurrence_at(sups[b], props[b], rho_lo, tt - lo, dt)

        try:
            res = minimize_scalar(neg_c, bracket=(lo, t[k], hi), method="golden", tol=1e-6)
            if -res.fun > c_max[b] and lo <= res.x <= hi:
                c_max[b] = -res.fun
                t_max[b] = res.x
        except ValueError:
            # flat top: the grid value already is the maximum
            pass
    if np.any(at_boundary):
        warnings.warn(
            f"maximum at the horizon gamma*t = {horizon} for delta = "
            f"{deltas[at_boundary].tolist()}; the true maximum may lie later",
            RuntimeWarning,
            stacklevel=2,
        )
    return DetuningScan(deltas, c_max, t_max, at_boundary)


def max_concurrence(
    kind, initial, theta0: float, horizon: float = 100.0, delta: float = 0.0, **kw
) -> tuple[float, float]:
    """Refined ``(C_max, t_at_max)`` for a single parameter point."""
    scan = max_concurrence_vs_detuning(kind, initial, theta0, [delta], horizon, **kw)
    return float(scan.c_max[0]), float(scan.t_at_max[0])


def sudden_birth_time(times, c, threshold: float = 1e-4) -> float | None:
    """First time the concurrence exceeds ``threshold``, linearly interpolated.

    Returns None when it never does.
    """
    if threshold < 0:
        raise ValueError("threshold must be >= 0")
    times = np.asarray(times, dtype=float)
    c = np.asarray(c, dtype=float)
    above = np.nonzero(c > threshold)[0]
    if above.size == 0:
        return None
    k = int(above[0])
    if k == 0:
        return float(times[0])
    c0, c1 = c[k - 1], c[k]
    frac = (threshold - c0) / (c1 - c0)
    return float(times[k - 1] + frac * (times[k] - times[k - 1]))
