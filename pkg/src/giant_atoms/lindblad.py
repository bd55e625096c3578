"""Master equation for the two-atom density matrix and its fixed-step integrator.

States are 4x4 matrices in the product basis ``(|ee>, |eg>, |ge>, |gg>)``.
Atom ``a`` is the left tensor factor. Time is in the same inverse units as
the rates, so with ``gamma = 1`` the time axis is ``gamma * t``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterator, Sequence

import numpy as np

from .entanglement import concurrence
from .rates import DerivedRates, PhysicalParams

BASIS_LABELS = ("ee", "eg", "ge", "gg")
DEFAULT_DT = 1e-3
# RK4 is stable for |h * lambda| up to ~2.8 along both axes; keep a margin
RK4_STABILITY = 2.5

HERMITIAN_TOL = 1e-10
TRACE_TOL = 1e-9
POSITIVITY_TOL = 1e-8

_SM = np.array([[0, 0], [1, 0]], dtype=complex)  # |g><e| in (e, g)
_SZ = np.diag([1.0, -1.0]).astype(complex)
_I2 = np.eye(2, dtype=complex)

SIGMA_MINUS_A = np.kron(_SM, _I2)
SIGMA_MINUS_B = np.kron(_I2, _SM)
SIGMA_Z_A = np.kron(_SZ, _I2)
SIGMA_Z_B = np.kron(_I2, _SZ)

# index permutation taking vec(rho) to vec(rho^T), row-major
_TRANSPOSE = np.array([4 * j + i for i in range(4) for j in range(4)])


class StepSizeError(RuntimeError):
    """The fixed step is outside the stability region of the integrator."""


def initial_state(spec: str | Sequence[complex]) -> np.ndarray:
    """Density matrix for a named product state or a pure-state amplitude vector.

    Named presets are ``"ee"``, ``"eg"`` (atom a excited), ``"ge"`` and ``"gg"``.
    Amplitude vectors are ordered like the basis and normalized here.
    """
    if isinstance(spec, str):
        key = spec.strip().lower()
        if key not in BASIS_LABELS:
            raise ValueError(f"unknown initial state {spec!r}; expected {BASIS_LABELS}")
        psi = np.zeros(4, dtype=complex)
        psi[BASIS_LABELS.index(key)] = 1.0
    else:
        psi = np.asarray(spec, dtype=complex).reshape(-1)
        if psi.shape != (4,):
            raise ValueError(f"amplitude vector must have 4 entries, got {psi.shape}")
        norm = np.linalg.norm(psi)
        if not np.isfinite(norm) or norm == 0:
            raise ValueError("amplitude vector must be finite and nonzero")
        psi = psi / norm
    return np.outer(psi, psi.conj())


def density_matrix_violations(rho: np.ndarray) -> dict[str, float]:
    """Worst deviation from Hermiticity, unit trace and positivity over a stack."""
    rho = np.asarray(rho, dtype=complex)
    herm = np.abs(rho - np.swapaxes(rho, -1, -2).conj()).max()
    tr = np.abs(np.trace(rho, axis1=-2, axis2=-1) - 1).max()
    sym = 0.5 * (rho + np.swapaxes(rho, -1, -2).conj())
    min_eig = np.linalg.eigvalsh(sym).min()
    return {"hermiticity": float(herm), "trace": float(tr), "min_eigenvalue": float(min_eig)}


def check_density_matrix(rho: np.ndarray) -> None:
    v = density_matrix_violations(rho)
    if v["hermiticity"] > HERMITIAN_TOL:
        raise ValueError(f"state is not Hermitian (deviation {v['hermiticity']:.2e})")
    if v["trace"] > TRACE_TOL:
        raise ValueError(f"state trace differs from 1 by {v['trace']:.2e}")
    if v["min_eigenvalue"] < -POSITIVITY_TOL:
        raise ValueError(f"state has negative eigenvalue {v['min_eigenvalue']:.2e}")


def hamiltonian_matrix(rates: DerivedRates, delta: float = 0.0) -> np.ndarray:
    """Coherent part of the master equation, with the detuning split symmetrically."""
    wa = rates.delta_omega_a + delta / 2
    wb = rates.delta_omega_b - delta / 2
    g = rates.g_ab
    return np.array(
        [
            [wa + wb, 0, 0, 0],
            [0, wa, g, 0],
            [0, g, wb, 0],
            [0, 0, 0, 0],
        ],
        dtype=complex,
    )


def _dissipator(rho, rate, x, y):
    # rate * (x rho y^+ - 1/2 {y^+ x, rho})
    yd = y.conj().T
    ydx = yd @ x
    return rate * (x @ rho @ yd - 0.5 * (ydx @ rho + rho @ ydx))


def liouvillian_apply(
    rates: DerivedRates, params: PhysicalParams | None, rho: np.ndarray
) -> np.ndarray:
    """Right-hand side ``d rho / dt`` of the master equation."""
    delta = params.delta if params is not None else 0.0
    h = hamiltonian_matrix(rates, delta)
    rho = np.asarray(rho, dtype=complex)
    out = -1j * (h @ rho - rho @ h)
    sa, sb = SIGMA_MINUS_A, SIGMA_MINUS_B
    out += _dissipator(rho, rates.Gamma_a, sa, sa)
    out += _dissipator(rho, rates.Gamma_b, sb, sb)
    out += _dissipator(rho, rates.Gamma_coll, sa, sb)
    out += _dissipator(rho, rates.Gamma_coll, sb, sa)
    if params is not None and params.gamma_nr:
        out += _dissipator(rho, params.gamma_nr, sa, sa)
        out += _dissipator(rho, params.gamma_nr, sb, sb)
    if params is not None and params.gamma_phi:
        # coherences between |e> and |g> of one atom decay at gamma_phi
        out += _dissipator(rho, params.gamma_phi / 2, SIGMA_Z_A, SIGMA_Z_A)
        out += _dissipator(rho, params.gamma_phi / 2, SIGMA_Z_B, SIGMA_Z_B)
    return out


def liouvillian_matrix(rates: DerivedRates, params: PhysicalParams | None = None) -> np.ndarray:
    """16x16 superoperator acting on row-major ``rho.reshape(16)``."""
    sup = np.empty((16, 16), dtype=complex)
    for k in range(16):
        unit = np.zeros(16, dtype=complex)
        unit[k] = 1.0
        sup[:, k] = liouvillian_apply(rates, params, unit.reshape(4, 4)).reshape(16)
    return sup


def rk4_propagator(superop: np.ndarray, h: float) -> np.ndarray:
    """One classic RK4 step for ``dv/dt = L v`` written as a matrix.

    For a linear autonomous system the four stages collapse to the truncated
    exponential series ``I + hL + (hL)^2/2 + (hL)^3/6 + (hL)^4/24``.
    """
    m = h * np.asarray(superop)
    eye = np.broadcast_to(np.eye(m.shape[-1], dtype=complex), m.shape)
    p = eye + m / 4
    p = eye + (m / 3) @ p
    p = eye + (m / 2) @ p
    return eye + m @ p


def _substeps(span: float, dt: float) -> int:
    return max(1, int(np.ceil(span / dt * (1 - 1e-12))))


def spectral_radius(superops: np.ndarray) -> np.ndarray:
    return np.abs(np.linalg.eigvals(superops)).max(axis=-1)


def propagate(
    states: np.ndarray,
    superops: np.ndarray,
    t_grid: Sequence[float],
    dt: float = DEFAULT_DT,
) -> Iterator[tuple[int, np.ndarray]]:
    """Integrate a batch of states, yielding ``(index, states)`` at each grid time.

    ``states`` has shape ``(B, 4, 4)`` and ``superops`` ``(B, 16, 16)``. Each grid
    interval is split into equal substeps no longer than ``dt``; after every
    substep the state is symmetrized to ``(rho + rho^dagger) / 2``.
    """
    times = np.asarray(t_grid, dtype=float)
    if times.ndim != 1 or times.size == 0:
        raise ValueError("t_grid must be a non-empty 1-D array")
    if times.size > 1 and np.any(np.diff(times) <= 0):
        raise ValueError("t_grid must be strictly increasing")
    if not (dt > 0 and np.isfinite(dt)):
        raise StepSizeError(f"step size must be positive and finite, got {dt}")
    superops = np.asarray(superops, dtype=complex)
    v = np.asarray(states, dtype=complex).reshape(-1, 16).copy()
    if superops.shape != (v.shape[0], 16, 16):
        raise ValueError(f"superops shape {superops.shape} does not match {v.shape[0]} states")

    radius = spectral_radius(superops).max() if v.shape[0] else 0.0
    yield 0, v.reshape(-1, 4, 4).copy()

    spans = np.diff(times)
    if spans.size and np.allclose(spans, spans[0], rtol=1e-9, atol=0):
        # uniform grid: one spacing, so rounding in the grid does not force
        # a new propagator every interval
        spans[:] = (times[-1] - times[0]) / spans.size
    prop, prop_h = None, None
    for k in range(1, times.size):
        span = spans[k - 1]
        n = _substeps(span, dt)
        h = span / n
        if h * radius > RK4_STABILITY:
            raise StepSizeError(
                f"step {h:.3g} times spectral radius {radius:.3g} exceeds the RK4 "
                f"stability limit {RK4_STABILITY}; reduce dt"
            )
        if prop is None or abs(h - prop_h) > 1e-13 * h:
            # stored transposed so the batched step is a row-vector product
            prop, prop_h = np.ascontiguousarray(np.swapaxes(rk4_propagator(superops, h), 1, 2)), h
        for _ in range(n):
            m = (v[:, None, :] @ prop).reshape(-1, 4, 4)
            v = (0.5 * (m + m.conj().transpose(0, 2, 1))).reshape(-1, 16)
        if not np.all(np.isfinite(v)):
            raise StepSizeError(f"state became non-finite at t={times[k]:.6g}")
        yield k, v.reshape(-1, 4, 4).copy()


def evolve_batch(
    initials: np.ndarray,
    superops: np.ndarray,
    t_grid: Sequence[float],
    dt: float = DEFAULT_DT,
) -> np.ndarray:
    """Run :func:`propagate` to completion; returns states of shape ``(B, T, 4, 4)``."""
    times = np.asarray(t_grid, dtype=float)
    initials = np.asarray(initials, dtype=complex).reshape(-1, 4, 4)
    out = np.empty((initials.shape[0], times.size, 4, 4), dtype=complex)
    for k, states in propagate(initials, superops, times, dt):
        out[:, k] = states
    return out


@dataclass
class Trajectory:
    times: np.ndarray
    states: np.ndarray
    rates: DerivedRates | None = None
    params: PhysicalParams | None = None
    dt: float = DEFAULT_DT
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.times = np.asarray(self.times, dtype=float)
        self.states = np.asarray(self.states, dtype=complex)
        if self.states.shape != (self.times.size, 4, 4):
            raise ValueError(
                f"states shape {self.states.shape} does not match {self.times.size} times"
            )

    def __len__(self):
        return self.times.size

    @cached_property
    def concurrence(self) -> np.ndarray:
        return concurrence(self.states)

    @property
    def final(self) -> np.ndarray:
        return self.states[-1]

    def violations(self) -> dict[str, float]:
        return density_matrix_violations(self.states)


def evolve(
    initial: np.ndarray | str | Sequence[complex],
    rates: DerivedRates,
    params: PhysicalParams | None,
    t_grid: Sequence[float],
    dt: float = DEFAULT_DT,
) -> Trajectory:
    """Integrate the master equation from ``initial`` and sample on ``t_grid``.

    ``initial`` is a preset name, a pure-state amplitude vector or a 4x4
    density matrix.

    ``t_grid`` must start at 0. Raises :class:`StepSizeError` when ``dt`` is not
    inside the stable region for these rates.
    """
    if isinstance(initial, str) or np.ndim(initial) == 1:
        rho0 = initial_state(initial)
    else:
        rho0 = np.asarray(initial, dtype=complex)
    check_density_matrix(rho0)
    times = np.asarray(t_grid, dtype=float)
    if times.size == 0 or times[0] != 0:
        raise ValueError("t_grid must start at 0")
    sup = liouvillian_matrix(rates, params)
    states = evolve_batch(rho0[None], sup[None], times, dt)[0]
    return Trajectory(times, states, rates=rates, params=params, dt=dt)
