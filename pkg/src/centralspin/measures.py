"""Entanglement and coherence functionals on density matrices.

All entropies use the natural logarithm.
"""
from __future__ import annotations

import numpy as np

__all__ = [
    "check_density_matrix",
    "eigenvalues",
    "von_neumann_entropy",
    "relative_entropy_of_coherence",
    "purity",
    "bloch_purity",
    "concurrence",
]

# round-off from the integrator shows up as slightly negative eigenvalues
CLIP_TOL = 1e-9
INVALID_TOL = 1e-6
# eigenvalues below this are round-off noise around an exact zero
RANK_TOL = 1e-13
# off-diagonal mass below this counts as an incoherent state
COHERENCE_TOL = 1e-12

_SIGMA_YY = np.array(
    [[0, 0, 0, -1], [0, 0, 1, 0], [0, 1, 0, 0], [-1, 0, 0, 0]], dtype=complex
)


def check_density_matrix(rho, tol: float = 1e-10) -> np.ndarray:
    """Return ``rho`` as a complex array, raising if it is not a density matrix."""
    rho = np.asarray(rho, dtype=complex)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise ValueError(f"density matrix must be square, got shape {rho.shape}")
    if np.max(np.abs(rho - rho.conj().T)) > tol:
        raise ValueError("density matrix is not hermitian")
    if abs(np.trace(rho) - 1) > tol:
        raise ValueError(f"density matrix trace is {np.trace(rho).real!r}, expected 1")
    if np.linalg.eigvalsh(rho)[0] < -CLIP_TOL:
        raise ValueError("density matrix has a negative eigenvalue")
    return rho


def eigenvalues(rho) -> np.ndarray:
    """Eigenvalues of a hermitian matrix in descending order."""
    rho = np.asarray(rho, dtype=complex)
    return np.linalg.eigvalsh(0.5 * (rho + rho.conj().T))[::-1]


def _entropy_of(p: np.ndarray) -> float:
    if p.min(initial=0.0) < -INVALID_TOL:
        raise ValueError(f"eigenvalue {p.min()!r} below -{INVALID_TOL}: invalid density matrix")
    # p ln p is below 4e-13 for p < 1e-14; such eigenvalues are round-off
    p = p[p > 1e-14]
    # eigenvalues a hair above 1 would give -0.0 or -1e-16
    return max(float(-np.sum(p * np.log(p))), 0.0)


def von_neumann_entropy(rho) -> float:
    """``S(rho) = -Tr rho ln rho`` with ``0 ln 0 = 0``."""
    return _entropy_of(eigenvalues(rho))


def relative_entropy_of_coherence(rho) -> float:
    """``S(rho_diag) - S(rho)`` in the basis ``rho`` is written in."""
    rho = np.asarray(rho, dtype=complex)
    if np.sum(np.abs(rho - np.diag(np.diag(rho)))) < COHERENCE_TOL:
        return 0.0
    value = _entropy_of(np.diag(rho).real) - von_neumann_entropy(rho)
    return max(value, 0.0)


def purity(rho) -> float:
    """``Tr rho^2``."""
    rho = np.asarray(rho, dtype=complex)
    return float(np.real(np.vdot(rho.conj().T, rho)))


def bloch_purity(rho) -> float:
    """Qubit purity from spin expectation values, ``1/2 + 2 sum_i <S^i>^2``."""
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (2, 2):
        raise ValueError("Bloch form applies to 2x2 density matrices only")
    sx = rho[1, 0].real
    sy = rho[1, 0].imag
    sz = 0.5 * (rho[0, 0] - rho[1, 1]).real
    return 0.5 + 2 * (sx**2 + sy**2 + sz**2)


def concurrence(rho) -> float:
    """Wootters concurrence of a two-qubit density matrix.

    With ``rho = X X^dagger`` the square roots of the eigenvalues of
    ``rho (sy x sy) rho* (sy x sy)`` are the singular values of the
    complex-symmetric matrix ``X^T (sy x sy) X``.  Building ``X`` from the
    eigenvectors of ``rho`` and dropping round-off eigenvalues keeps
    rank-deficient states accurate to machine precision, where taking square
    roots of near-zero eigenvalues would amplify 1e-16 noise to 1e-8.
    """
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (4, 4):
        raise ValueError(f"concurrence needs a 4x4 density matrix, got {rho.shape}")
    w, v = np.linalg.eigh(0.5 * (rho + rho.conj().T))
    keep = w > RANK_TOL
    X = v[:, keep] * np.sqrt(w[keep])
    roots = np.zeros(4)
    roots[: X.shape[1]] = np.linalg.svd(X.T @ _SIGMA_YY @ X, compute_uv=False)
    return float(max(0.0, roots[0] - roots[1] - roots[2] - roots[3]))
