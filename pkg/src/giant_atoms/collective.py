"""Collective (dressed) basis of the two atoms and the rates between its levels.

The four collective levels are ``|psi_2> = |ee>``, the two single-excitation
eigenstates ``|psi_+>``, ``|psi_->`` of the coherent Hamiltonian, and
``|psi_0> = |gg>``.

Amplitudes follow the convention ``|psi_+-> ∝ (alpha_+- / g_ab) |eg> + 2 |ge>``
with ``alpha_+- = (dw_a - dw_b) +- Omega``. Everything below is evaluated in
a form that stays finite as ``g_ab -> 0``; only ``Omega -> 0`` is singular.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .rates import DerivedRates

DEGENERACY_EPS = 1e-10


class DegenerateBasisError(ValueError):
    """Omega vanishes, so |psi_+> and |psi_-> are not uniquely defined."""


@dataclass(frozen=True)
class CollectiveBasis:
    omega: float
    e_plus: float
    e_minus: float
    alpha_plus: float
    alpha_minus: float
    n_plus: float
    n_minus: float
    psi_plus: np.ndarray
    psi_minus: np.ndarray
    degenerate: bool = False

    def unitary(self) -> np.ndarray:
        """Columns are ``psi_2, psi_+, psi_-, psi_0`` in the product basis."""
        u = np.zeros((4, 4), dtype=complex)
        u[0, 0] = 1.0
        u[1:3, 1] = self.psi_plus
        u[1:3, 2] = self.psi_minus
        u[3, 3] = 1.0
        return u


@dataclass(frozen=True)
class TransitionRates:
    g2p: float
    g2m: float
    gp0: float
    gm0: float
    gpm: float
    delta_coh: float

    def as_dict(self) -> dict[str, float]:
        return {
            "Gamma_2+": self.g2p,
            "Gamma_2-": self.g2m,
            "Gamma_+0": self.gp0,
            "Gamma_-0": self.gm0,
            "Gamma_+-": self.gpm,
            "Delta": self.delta_coh,
        }


def _split(rates: DerivedRates, delta: float):
    wa = rates.delta_omega_a + delta / 2
    wb = rates.delta_omega_b - delta / 2
    return wa, wb, wa - wb, rates.g_ab


def _alphas(d: float, g: float, omega: float) -> tuple[float, float]:
    # alpha_+ * alpha_- = -4 g^2; get the small one from the product, not by cancellation
    if d >= 0:
        ap = d + omega
        am = -4 * g * g / ap if ap > 0 else 0.0
    else:
        am = d - omega
        ap = -4 * g * g / am
    return ap, am


def _eigvec(alpha: float, alpha_other: float, g: float) -> np.ndarray:
    first = np.array([alpha, 2 * g])
    second = np.array([-2 * g, alpha_other])
    v = first if np.hypot(*first) >= np.hypot(*second) else second
    v = v / np.hypot(*v)
    # |ge> amplitude positive, as in (alpha/g, 2); |eg> positive if that vanishes
    ref = v[1] if abs(v[1]) > 1e-300 else v[0]
    return (v if ref > 0 else -v).astype(complex)


def collective_basis(
    rates: DerivedRates,
    delta: float = 0.0,
    eps: float = DEGENERACY_EPS,
    allow_degenerate: bool = False,
) -> CollectiveBasis:
    """Eigenbasis of the single-excitation block of the coherent Hamiltonian.

    Raises :class:`DegenerateBasisError` when ``Omega <= eps``. With
    ``allow_degenerate=True`` the symmetric/antisymmetric pair
    ``(|eg> +- |ge>)/sqrt(2)`` is returned instead and ``degenerate`` is set.
    """
    wa, wb, d, g = _split(rates, delta)
    omega = float(np.hypot(2 * g, d))
    if omega <= eps:
        if not allow_degenerate:
            raise DegenerateBasisError(
                f"Omega = {omega:.3e} <= {eps:g}: collective states are degenerate"
            )
        s = 1 / np.sqrt(2)
        return CollectiveBasis(
            omega=omega,
            e_plus=float(wa + wb + omega) / 2,
            e_minus=float(wa + wb - omega) / 2,
            alpha_plus=0.0,
            alpha_minus=0.0,
            n_plus=s / 2,
            n_minus=s / 2,
            psi_plus=np.array([s, s], dtype=complex),
            psi_minus=np.array([s, -s], dtype=complex),
            degenerate=True,
        )
    ap, am = _alphas(d, g, omega)
    psi_p = _eigvec(ap, am, g)
    psi_m = _eigvec(am, ap, g)
    return CollectiveBasis(
        omega=omega,
        e_plus=float(wa + wb + omega) / 2,
        e_minus=float(wa + wb - omega) / 2,
        alpha_plus=float(ap),
        alpha_minus=float(am),
        n_plus=float(psi_p[1].real / 2),
        n_minus=float(psi_m[1].real / 2),
        psi_plus=psi_p,
        psi_minus=psi_m,
    )


def transition_rates(
    rates: DerivedRates, delta: float = 0.0, eps: float = DEGENERACY_EPS
) -> TransitionRates:
    """Decay rates along the ladder ``psi_2 -> psi_+- -> psi_0``.

    The square-root terms reduce, using ``-alpha_+ alpha_- = 4 g^2``, to
    ``sqrt(-alpha_-/alpha_+) = |alpha_-| / (2|g|)``; this is the form evaluated.
    """
    _, _, d, g = _split(rates, delta)
    omega = float(np.hypot(2 * g, d))
    if omega <= eps:
        raise DegenerateBasisError(
            f"Omega = {omega:.3e} <= {eps:g}: transition rates are undefined"
        )
    ap, am = _alphas(d, g, omega)
    ga, gb, gc = rates.Gamma_a, rates.Gamma_b, rates.Gamma_coll
    two_omega = 2 * omega

    root_prod = 2 * abs(g)  # sqrt(-alpha_+ alpha_-)
    if g != 0:
        # g * (sqrt(-a_-/a_+) - sqrt(-a_+/a_-))
        g_cross = np.sign(g) * (abs(am) - abs(ap)) / 2
        g2_cross = abs(g) * (abs(am) - abs(ap)) / 2
    else:
        g_cross = g2_cross = 0.0

    return TransitionRates(
        g2p=float((gb * ap - ga * am + 4 * g * gc) / two_omega),
        g2m=float((ga * ap - gb * am - 4 * g * gc) / two_omega),
        gp0=float((ga * ap - gb * am + 4 * g * gc) / two_omega),
        gm0=float((gb * ap - ga * am - 4 * g * gc) / two_omega),
        gpm=float(((ga - gb) * root_prod + 2 * gc * g_cross) / (4 * omega)),
        delta_coh=float((d * root_prod + 2 * g2_cross) / two_omega),
    )


@dataclass(frozen=True)
class CollectivePopulations:
    times: np.ndarray
    rho22: np.ndarray
    rho_pp: np.ndarray
    rho_mm: np.ndarray
    rho00: np.ndarray
    rho_pm: np.ndarray

    @property
    def re_pm(self) -> np.ndarray:
        return self.rho_pm.real

    @property
    def im_pm(self) -> np.ndarray:
        return self.rho_pm.imag

    def as_dict(self) -> dict[str, np.ndarray]:
        return {
            "rho22": self.rho22,
            "rho_pp": self.rho_pp,
            "rho_mm": self.rho_mm,
            "rho00": self.rho00,
            "re_rho_pm": self.re_pm,
            "im_rho_pm": self.im_pm,
        }


def project_states(states: np.ndarray, basis: CollectiveBasis) -> np.ndarray:
    """Density matrices ``U^dagger rho U`` in the collective basis."""
    u = basis.unitary()
    return u.conj().T @ np.asarray(states, dtype=complex) @ u


def collective_populations(traj, basis: CollectiveBasis) -> CollectivePopulations:
    """Project every state of a trajectory onto the collective levels."""
    coll = project_states(traj.states, basis)
    return CollectivePopulations(
        times=np.asarray(traj.times),
        rho22=coll[:, 0, 0].real,
        rho_pp=coll[:, 1, 1].real,
        rho_mm=coll[:, 2, 2].real,
        rho00=coll[:, 3, 3].real,
        rho_pm=coll[:, 1, 2],
    )
