"""Closed-form dynamics of one qubit uniformly coupled to a Dicke-state bath.

The Hamiltonian is ``omega1 S^z + 2 g1p S^z L_z + g1 (S^+ L_- + S^- L_+)``.
Because ``S^z + L_z`` is conserved, the pair ``|up>|n-1 up spins>``,
``|down>|n up spins>`` evolves as an isolated two-level system with
detuning ``b_n`` and coupling ``a_n``; the result is a set of Rabi
oscillations with frequencies ``A_n = sqrt(b_n^2 + 4 a_n^2)``.

Amplitude tables are indexed by ``n``, the number of up spins in the bath,
so ``F_up[n]`` multiplies ``|up>|N-n>_D``.

Times are in units of ``1/g1`` when ``g1 = 1`` (the default).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .dicke_basis import BathState
from .measures import von_neumann_entropy

__all__ = [
    "SingleQubitParams",
    "QubitState",
    "SingleAmplitudeTable",
    "SpectralData",
    "spectral",
    "wv",
    "wv_all",
    "evolve",
    "qubit_density",
    "bath_density",
    "observables",
    "channel",
    "apply_channel",
    "revival_time",
    "coherence",
    "entropy",
]

UP, DOWN = 0, 1


@dataclass(frozen=True)
class SingleQubitParams:
    n_spins: int
    omega1: float = 1.0
    g1: float = 1.0
    g1p: float = 0.0

    @property
    def half(self) -> float:
        return self.n_spins / 2


@dataclass(frozen=True)
class QubitState:
    f_up: complex
    f_down: complex

    def __post_init__(self):
        norm = abs(self.f_up) ** 2 + abs(self.f_down) ** 2
        if abs(norm - 1) > 1e-12:
            raise ValueError(f"qubit state not normalized: {norm!r}")

    @classmethod
    def up(cls) -> "QubitState":
        return cls(1.0, 0.0)

    @classmethod
    def down(cls) -> "QubitState":
        return cls(0.0, 1.0)

    @classmethod
    def plus(cls) -> "QubitState":
        r = 1 / math.sqrt(2)
        return cls(r, r)

    def vector(self) -> np.ndarray:
        return np.array([self.f_up, self.f_down], dtype=complex)

    def density(self) -> np.ndarray:
        v = self.vector()
        return np.outer(v, v.conj())


@dataclass(frozen=True)
class SingleAmplitudeTable:
    """Schrodinger-picture amplitudes at time ``t``; index ``n`` = bath up spins."""

    t: float
    F_up: np.ndarray
    F_down: np.ndarray

    @property
    def n_spins(self) -> int:
        return len(self.F_up) - 1


@dataclass(frozen=True)
class SpectralData:
    """Per-sector couplings ``a``, detunings ``b`` and Rabi frequencies ``A``, n = 0..N+1."""

    a: np.ndarray
    b: np.ndarray
    A: np.ndarray


def spectral(params: SingleQubitParams) -> SpectralData:
    N = params.n_spins
    n = np.arange(N + 2)
    # n (N + 1 - n) is an exact integer: keeps a_n == a_{N+1-n} bit for bit
    link = (n * (N + 1 - n)).astype(float)
    a = params.g1 * np.sqrt(link)
    b = params.omega1 + params.g1p * (2 * n - N - 1)
    A = np.sqrt(b**2 + 4 * params.g1**2 * link)
    return SpectralData(a, b, A)


def _sin_over(A: np.ndarray, t: float) -> np.ndarray:
    """``sin(A t / 2) / A``, finite at ``A = 0``."""
    return 0.5 * t * np.sinc(A * t / (2 * np.pi))


def wv_all(params: SingleQubitParams, t: float, spec: SpectralData | None = None):
    """``W_n(t)`` and ``V_n(t)`` for every n = 0..N+1.

    The boundary sectors have ``a = 0`` and ``A = |b|``, for which the
    interior formula reduces to ``W = exp(-i b t/2)``, ``V = 0``.
    """
    spec = spectral(params) if spec is None else spec
    s = _sin_over(spec.A, t)
    W = np.cos(0.5 * spec.A * t) - 1j * spec.b * s
    V = -2j * spec.a * s
    return W, V


def wv(params: SingleQubitParams, n: int, t: float) -> tuple[complex, complex]:
    if not 0 <= n <= params.n_spins + 1:
        raise ValueError(f"sector index must lie in 0..N+1, got {n}")
    W, V = wv_all(params, t)
    return complex(W[n]), complex(V[n])


def _check_bath(params: SingleQubitParams, bath: BathState):
    if bath.n_spins != params.n_spins:
        raise ValueError(f"bath has {bath.n_spins} spins but params specify {params.n_spins}")


def evolve(params: SingleQubitParams, q0: QubitState, bath0: BathState, t: float) -> SingleAmplitudeTable:
    """Schrodinger-picture amplitudes of the product initial state at time ``t``."""
    _check_bath(params, bath0)
    N = params.n_spins
    W, V = wv_all(params, t)
    # Q[n] = gamma_{N-n}, padded so Q[-1] (gamma_{N+1}) and Q[N+1] (gamma_{-1}) are 0
    Q = np.zeros(N + 3, dtype=complex)
    Q[1 : N + 2] = bath0.by_excitation()
    q = Q[1 : N + 2]
    q_next = Q[2 : N + 3]
    q_prev = Q[0 : N + 1]
    phase = np.exp(0.5j * params.g1p * t)
    f_up, f_dn = complex(q0.f_up), complex(q0.f_down)
    F_up = phase * (f_up * q * W[1:] + f_dn * q_next * V[1:])
    F_down = phase * (f_dn * q * W[:-1].conj() + f_up * q_prev * V[:-1])
    return SingleAmplitudeTable(float(t), F_up, F_down)


def qubit_density(table: SingleAmplitudeTable) -> np.ndarray:
    """Reduced qubit state in the ``(up, down)`` basis."""
    F = np.vstack([table.F_up, table.F_down])
    return F @ F.conj().T


def bath_density(table: SingleAmplitudeTable) -> np.ndarray:
    """Reduced bath state in the Dicke (down-flip) basis."""
    F = np.vstack([table.F_up[::-1], table.F_down[::-1]])
    return F.T @ F.conj()


def coherence(rho: np.ndarray) -> float:
    """``|<S^+>| = |rho_{down, up}|``."""
    return float(abs(rho[DOWN, UP]))


def entropy(rho: np.ndarray) -> float:
    return von_neumann_entropy(rho)


def observables(params: SingleQubitParams, bath0: BathState, t: float, q0: QubitState | None = None):
    """``(<S^x>, <S^y>, <S^z>, purity)`` for a qubit starting in ``|up>``.

    Closed-form sums over the Rabi sectors; independent of the density-matrix
    path, which handles general initial states.
    """
    if q0 is not None and (abs(q0.f_down) > 0 or abs(abs(q0.f_up) - 1) > 1e-12):
        raise ValueError("closed-form observables assume the qubit starts in |up>; use qubit_density")
    _check_bath(params, bath0)
    spec = spectral(params)
    a, b, A = spec.a, spec.b, spec.A
    Q = bath0.by_excitation()
    N = params.n_spins

    def safe(x):
        return np.where(x > 0, x, 1.0)

    # (b^2 + 4 a^2 cos A t) / A^2 = 1 - (4 a^2 / A^2)(1 - cos A t); sectors with A = 0 have a = 0
    A1 = A[1:]
    sz_terms = 1.0 - 4 * a[1:] ** 2 / safe(A1) ** 2 * (1.0 - np.cos(A1 * t))
    sz = 0.5 * float(np.sum(np.abs(Q) ** 2 * sz_terms))

    n = np.arange(1, N + 1)
    An, An1 = A[n], A[n + 1]
    x_terms = a[n] * b[n + 1] / (safe(An) * safe(An1)) * (
        np.cos(0.5 * (An - An1) * t) - np.cos(0.5 * (An + An1) * t)
    )
    y_terms = -a[n] / safe(An) * (np.sin(0.5 * (An + An1) * t) + np.sin(0.5 * (An - An1) * t))
    # complex Q (phi != 0) enter as Q_{n-1} Q_n^*; real Q reproduce the usual sums
    weights = Q[n - 1] * Q[n].conj()
    s_plus = np.sum(weights * (x_terms + 1j * y_terms))
    sx, sy = float(s_plus.real), float(s_plus.imag)
    P = 0.5 + 2 * (sx**2 + sy**2 + sz**2)
    return sx, sy, sz, P


def channel(params: SingleQubitParams, bath0: BathState, t: float) -> np.ndarray:
    """Coefficients ``Y[a, b, c, d]`` with ``rho_ab(t) = sum_cd Y_abcd rho_cd(0)``.

    Index 0 is ``up`` and 1 is ``down``.  The sums are the explicit
    sector-by-sector expressions with the bath amplitude ``Q_n`` taken as
    ``gamma_{N-n}``, valid for any Dicke superposition.
    """
    _check_bath(params, bath0)
    N = params.n_spins
    W, V = wv_all(params, t)
    Q = bath0.by_excitation()
    Qc = Q.conj()
    n0 = np.arange(0, N + 1)  # n = 0..N
    n1 = np.arange(1, N + 1)  # n = 1..N
    nm = np.arange(1, N)  # n = 1..N-1
    absQ2 = np.abs(Q) ** 2

    Y = np.zeros((2, 2, 2, 2), dtype=complex)
    Y[UP, UP, UP, UP] = np.sum(absQ2[n0] * np.abs(W[n0 + 1]) ** 2)
    Y[UP, UP, DOWN, DOWN] = np.sum(absQ2[n1] * np.abs(V[n1]) ** 2)
    Y[UP, UP, UP, DOWN] = np.sum(Q[n1 - 1] * Qc[n1] * W[n1] * V[n1].conj())
    Y[UP, UP, DOWN, UP] = np.conj(Y[UP, UP, UP, DOWN])

    Y[DOWN, DOWN, UP, UP] = np.sum(absQ2[n1 - 1] * np.abs(V[n1]) ** 2)
    Y[DOWN, DOWN, DOWN, DOWN] = np.sum(absQ2[n0] * np.abs(W[n0]) ** 2)
    Y[DOWN, DOWN, UP, DOWN] = np.sum(Q[n1 - 1] * Qc[n1] * W[n1] * V[n1])
    Y[DOWN, DOWN, DOWN, UP] = np.conj(Y[DOWN, DOWN, UP, DOWN])

    Y[UP, DOWN, UP, UP] = np.sum(Q[n1] * Qc[n1 - 1] * W[n1 + 1] * V[n1].conj())
    Y[DOWN, UP, UP, UP] = np.conj(Y[UP, DOWN, UP, UP])
    Y[UP, DOWN, DOWN, DOWN] = np.sum(Qc[n1 - 1] * Q[n1] * W[n1 - 1] * V[n1])
    Y[DOWN, UP, DOWN, DOWN] = np.conj(Y[UP, DOWN, DOWN, DOWN])
    Y[UP, DOWN, UP, DOWN] = np.sum(absQ2[n0] * W[n0] * W[n0 + 1])
    Y[DOWN, UP, DOWN, UP] = np.conj(Y[UP, DOWN, UP, DOWN])
    Y[UP, DOWN, DOWN, UP] = np.sum(Qc[nm - 1] * Q[nm + 1] * V[nm].conj() * V[nm + 1])
    Y[DOWN, UP, UP, DOWN] = np.conj(Y[UP, DOWN, DOWN, UP])
    return Y


def apply_channel(Y: np.ndarray, rho0: np.ndarray) -> np.ndarray:
    return np.einsum("abcd,cd->ab", Y, rho0)


def revival_time(params: SingleQubitParams, bath0: BathState) -> float | None:
    """Predicted first revival time of the qubit state, or ``None``.

    For ``g1p = 0`` the revival follows from the Rabi frequency spacing at the
    most probable sector ``n_max`` (ties go to the larger ``n``):
    ``t_r = pi / (A_nmax - A_{nmax+1})``.  For ``g1p = g1`` the spacing is
    nearly uniform and the first revival sits at ``L pi / g1``.  Other
    anisotropies have no simple prediction.
    """
    _check_bath(params, bath0)
    g, gp = params.g1, params.g1p
    if gp == 0:
        weights = np.abs(bath0.by_excitation())
        n_max = int(np.flatnonzero(weights >= weights.max() * (1 - 1e-12))[-1])
        A = spectral(params).A
        gap = A[n_max] - A[n_max + 1]
        if gap <= 0:
            return None
        return float(np.pi / gap)
    if math.isclose(gp, g, rel_tol=1e-12):
        return params.half * math.pi / abs(g)
    return None
