"""Wootters concurrence of two-qubit density matrices.

Every function accepts a single 4x4 matrix or a stack ``(..., 4, 4)``.
"""
from __future__ import annotations

import numpy as np

# sigma_y (x) sigma_y; real and basis-order independent up to an overall sign
SIGMA_YY = np.array(
    [
        [0, 0, 0, -1],
        [0, 0, 1, 0],
        [0, 1, 0, 0],
        [-1, 0, 0, 0],
    ],
    dtype=complex,
)

EIG_TOL = 1e-8


class NumericalError(ArithmeticError):
    """The spectrum of rho * rho_tilde is not real and nonnegative within tolerance."""


def spin_flip(rho: np.ndarray) -> np.ndarray:
    """Return ``(sy x sy) rho* (sy x sy)``."""
    rho = np.asarray(rho, dtype=complex)
    return SIGMA_YY @ rho.conj() @ SIGMA_YY


def wootters_eigenvalues(rho: np.ndarray, check: bool = True) -> np.ndarray:
    """Eigenvalues of ``rho @ spin_flip(rho)``, sorted in descending order.

    Computed with a general (non-Hermitian) dense eigensolver. Imaginary parts
    are dropped and tiny negative real parts clamped to zero.
    """
    rho = np.asarray(rho, dtype=complex)
    ev = np.linalg.eigvals(rho @ spin_flip(rho))
    if check:
        if np.any(ev.real < -EIG_TOL) or np.any(np.abs(ev.imag) > EIG_TOL):
            worst = ev.flat[np.argmax(np.abs(ev.imag) + np.maximum(-ev.real, 0))]
            raise NumericalError(
                f"rho*rho_tilde has eigenvalue {worst:.3e} outside the real "
                f"nonnegative axis (tolerance {EIG_TOL:g})"
            )
    lam = np.clip(ev.real, 0.0, None)
    return -np.sort(-lam, axis=-1)


def _sqrt_lambdas(rho: np.ndarray) -> np.ndarray:
    # sqrt(lambda_i) are the singular values of tau = W^T (sy x sy) W with
    # rho = W W^dagger. This avoids sqrt() amplifying eigensolver noise on the
    # vanishing eigenvalues of a (near) pure state.
    w, v = np.linalg.eigh(rho)
    root = v * np.sqrt(np.clip(w, 0.0, None))[..., None, :]
    tau = np.swapaxes(root, -1, -2) @ SIGMA_YY @ root
    return np.linalg.svd(tau, compute_uv=False)


def concurrence(rho: np.ndarray, check: bool = True) -> np.ndarray | float:
    """Concurrence ``max(0, s1 - s2 - s3 - s4)`` with ``s_i = sqrt(lambda_i)``.

    Raises
    ------
    NumericalError
        On non-finite input, or if ``check`` is set and ``rho * rho_tilde`` has an eigenvalue with real
        part below ``-1e-8`` or imaginary part above ``1e-8`` in magnitude.
    """
    rho = np.asarray(rho, dtype=complex)
    if rho.shape[-2:] != (4, 4):
        raise ValueError(f"expected (..., 4, 4) density matrices, got {rho.shape}")
    if not np.all(np.isfinite(rho)):
        raise NumericalError("density matrix has non-finite entries")
    rho = 0.5 * (rho + np.swapaxes(rho, -1, -2).conj())
    if check:
        wootters_eigenvalues(rho, check=True)
    s = _sqrt_lambdas(rho)
    c = np.maximum(0.0, s[..., 0] - s[..., 1:].sum(axis=-1))
    c = np.minimum(c, 1.0)
    if c.ndim == 0:
        return float(c)
    return c


def pure_state_concurrence(psi: np.ndarray) -> float:
    """``2|ad - bc|`` for amplitudes ``(a, b, c, d)`` on ``(ee, eg, ge, gg)``."""
    a, b, c, d = np.asarray(psi, dtype=complex)
    return float(2 * abs(a * d - b * c))
