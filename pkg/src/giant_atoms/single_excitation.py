"""Single-excitation dynamics under the non-Hermitian effective Hamiltonian.

When the atoms start with one excitation and no drive, the quantum-jump
terms only feed ``|gg>``, which carries no entanglement. The amplitudes on
``|eg>`` and ``|ge>`` then follow ``i dc/dt = H_eff c`` and the concurrence is
``2 |c_eg c_ge|``. This module provides that evolution (exact 2x2 matrix
exponential) and the closed-form concurrences for the initial state ``|eg>``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .rates import CouplingKind, DerivedRates, canonical_theta, rates_for

DEFECTIVE_EPS = 1e-12


class UnsupportedInput(ValueError):
    """Closed forms exist only for zero detuning away from singular phases."""


@dataclass(frozen=True)
class AmplitudePair:
    c_eg: complex | np.ndarray
    c_ge: complex | np.ndarray

    @property
    def norm(self):
        return np.abs(self.c_eg) ** 2 + np.abs(self.c_ge) ** 2

    @property
    def concurrence(self):
        return 2 * np.abs(self.c_eg * self.c_ge)


def effective_hamiltonian(rates: DerivedRates, delta: float = 0.0) -> np.ndarray:
    wa = rates.delta_omega_a + delta / 2
    wb = rates.delta_omega_b - delta / 2
    off = rates.g_ab - 0.5j * rates.Gamma_coll
    return np.array(
        [
            [wa - 0.5j * rates.Gamma_a, off],
            [off, wb - 0.5j * rates.Gamma_b],
        ],
        dtype=complex,
    )


def expm2(m: np.ndarray) -> np.ndarray:
    """Exponential of a 2x2 complex matrix or a stack of them.

    Uses ``exp(M) = exp(mu) [cosh(s) I + sinh(s)/s (M - mu I)]`` with
    ``mu = tr(M)/2`` and ``s^2 = -det(M - mu I)``. Both ``cosh`` and
    ``sinh(s)/s`` are even in ``s``, so the branch of the root is irrelevant;
    near coinciding eigenvalues the series of ``sinh(s)/s`` is used.
    """
    m = np.asarray(m, dtype=complex)
    mu = 0.5 * (m[..., 0, 0] + m[..., 1, 1])
    n00 = m[..., 0, 0] - mu
    s = np.sqrt(n00 * n00 + m[..., 0, 1] * m[..., 1, 0])
    small = np.abs(s) < DEFECTIVE_EPS
    s_safe = np.where(small, 1.0, s)
    s2 = s * s
    cosh = np.where(small, 1 + s2 / 2, np.cosh(s_safe))
    sinhc = np.where(small, 1 + s2 / 6, np.sinh(s_safe) / s_safe)
    scale = np.exp(mu)
    out = np.empty(m.shape, dtype=complex)
    out[..., 0, 0] = scale * (cosh + sinhc * n00)
    out[..., 1, 1] = scale * (cosh - sinhc * n00)
    out[..., 0, 1] = scale * sinhc * m[..., 0, 1]
    out[..., 1, 0] = scale * sinhc * m[..., 1, 0]
    return out


def amplitudes(
    rates: DerivedRates,
    delta: float,
    t,
    initial: AmplitudePair | tuple[complex, complex] = (1.0, 0.0),
) -> AmplitudePair:
    """Solve ``i dc/dt = H_eff c``; ``t`` may be a scalar or an array."""
    t_arr = np.asarray(t, dtype=float)
    if np.any(t_arr < 0):
        raise ValueError("t must be nonnegative")
    if isinstance(initial, AmplitudePair):
        c0 = np.array([initial.c_eg, initial.c_ge], dtype=complex)
    else:
        c0 = np.asarray(initial, dtype=complex)
    h = effective_hamiltonian(rates, delta)
    u = expm2(-1j * h * t_arr[..., None, None])
    c = u @ c0
    return AmplitudePair(c[..., 0], c[..., 1])


def closed_form_excluded(kind: CouplingKind | str, theta0: float, tol: float = 1e-9) -> bool:
    """True where the nested-coupling prefactor denominator vanishes (theta0 = pi)."""
    kind = CouplingKind.parse(kind)
    if kind is not CouplingKind.NESTED:
        return False
    return abs(np.cos(canonical_theta(theta0) / 2)) < tol


def concurrence_closed_form(
    kind: CouplingKind | str, theta0: float, gamma: float, t, delta: float = 0.0
):
    """Analytic concurrence for the initial state ``|e>_a |g>_b`` at zero detuning."""
    if delta != 0:
        raise UnsupportedInput("closed-form concurrence is only available for delta = 0")
    if gamma <= 0:
        raise ValueError(f"gamma must be positive, got {gamma}")
    kind = CouplingKind.parse(kind)
    th = canonical_theta(theta0)
    gt = gamma * np.asarray(t, dtype=float)
    if np.any(gt < 0):
        raise ValueError("t must be nonnegative")
    e = np.exp
    if kind is CouplingKind.SEPARATE:
        arg = 4 * e(2j * th) * np.cos(th / 2) ** 2 * gt
        c = e(-2 * (1 + np.cos(th)) * gt) * np.abs(np.sinh(arg))
    elif kind is CouplingKind.BRAIDED:
        arg = (3 * e(1j * th) + e(3j * th)) * gt
        c = e(-4 * gt * np.cos(th) ** 2) * np.abs(np.sinh(arg))
    else:
        if closed_form_excluded(kind, th):
            raise UnsupportedInput(
                f"nested closed form is singular at theta0 = {theta0!r} (cos(theta0/2) = 0)"
            )
        a = np.sqrt((5 - 2 * e(1j * th) + e(2j * th)) * (e(1j * th) + e(2j * th)) ** 2)
        b = np.sqrt(
            8 * e(-4j * th) * np.cos(th / 2) ** 2 * (3 * np.cos(th) + 2j * np.sin(th) - 1)
        )
        d = 2 + np.cos(th) + np.cos(3 * th)
        eb = e(b * gt)
        f = e(-(a + d) * gt) * (
            (1 + e(a * gt)) * (1 - eb) * a
            + 2j * e(2j * th) * (1 - eb) * (1 - e(np.conj(b) * gt)) * np.sin(th)
        )
        denom = 4 * np.cos(th / 2) * np.sqrt((3 * np.cos(th) - 1) ** 2 + 4 * np.sin(th) ** 2)
        c = np.abs(f / denom)
    return float(c) if np.ndim(c) == 0 else c


@dataclass(frozen=True)
class OracleRow:
    kind: str
    theta0: float
    max_deviation: float
    argmax_t: float
    excluded: bool = False


def oracle_scan(
    kind: CouplingKind | str,
    theta_grid,
    t_grid,
    gamma: float = 1.0,
    rates_fn=None,
) -> list[OracleRow]:
    """Compare the closed form with ``2|c_eg c_ge|`` from the matrix exponential.

    ``rates_fn(kind, theta0, gamma)`` supplies the rates fed to the oracle;
    it defaults to the geometry sums and exists so a corrupted rate set can be
    injected to check that the scan notices.
    """
    kind = CouplingKind.parse(kind)
    rates_fn = rates_fn or rates_for
    t = np.asarray(t_grid, dtype=float)
    rows = []
    for th in np.asarray(theta_grid, dtype=float):
        if closed_form_excluded(kind, th):
            rows.append(OracleRow(kind.value, float(th), float("nan"), float("nan"), True))
            continue
        oracle = amplitudes(rates_fn(kind, th, gamma), 0.0, t).concurrence
        closed = concurrence_closed_form(kind, th, gamma, t)
        dev = np.abs(closed - oracle)
        k = int(np.argmax(dev))
        rows.append(OracleRow(kind.value, float(th), float(dev[k]), float(t[k])))
    return rows
