"""Two interacting qubits sharing one Dicke-state bath.

The non-flipping part ``H0 = omega1 S1z + omega2 S2z + 2 Jp S1z S2z
+ 2 (g1p S1z + g2p S2z) L_z`` is diagonal in ``|s1 s2>|n>``, with ``n`` the
number of up spins in the bath.  In the interaction picture with respect to
``H0`` the amplitudes ``G[s, n]`` obey

    i dG_a/dt = sum_b <a|H1|b> exp(i (E_a - E_b) t) G_b,

where ``H1 = J (S1+ S2- + h.c.) + sum_k g_k (S_k+ L_- + S_k- L_+)`` and
``E`` are the ``H0`` energies.  Written out per magnetization row, the
energy differences are exactly the phase factors of the familiar
four-amplitude equations of motion.  There is no closed form, so the
system is propagated with an adaptive Runge-Kutta scheme.

Amplitude arrays have shape ``(4, N+1)``; rows are ``uu, ud, du, dd``
(qubit 1 first) and columns count bath up spins.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .dicke_basis import BathState
from .rk import DEFAULT_BUDGET, LinearSystem, dopri5

__all__ = [
    "TwoQubitParams",
    "TwoQubitState",
    "TwoQubitAmplitudes",
    "LABELS",
    "bath_links",
    "energies",
    "flip_coupling",
    "linear_system",
    "magnetization_blocks",
    "eom_rhs",
    "initial_amplitudes",
    "integrate",
    "to_schrodinger",
    "two_qubit_density",
    "bath_density_2q",
    "magnetization",
    "sector_norms",
]

UU, UD, DU, DD = range(4)
LABELS = ("uu", "ud", "du", "dd")
# spin projections v = +1 (up) / -1 (down) of qubits 1 and 2, per row
_V1 = np.array([1, 1, -1, -1])
_V2 = np.array([1, -1, 1, -1])


@dataclass(frozen=True)
class TwoQubitParams:
    n_spins: int
    omega1: float = 0.0
    omega2: float = 0.0
    J: float = 0.0
    Jp: float = 0.0
    g1: float = 1.0
    g2: float = 0.0
    g1p: float = 0.0
    g2p: float = 0.0

    @property
    def half(self) -> float:
        return self.n_spins / 2

    @property
    def g12p(self) -> float:
        return self.g1p - self.g2p

    @property
    def omega12(self) -> float:
        return self.omega1 - self.omega2

    def default_max_step(self) -> float:
        return 0.05 / max(abs(self.g1), abs(self.g2), abs(self.J), 1.0)


@dataclass(frozen=True)
class TwoQubitState:
    A_uu: complex
    A_ud: complex
    A_du: complex
    A_dd: complex

    def __post_init__(self):
        norm = float(np.sum(np.abs(self.vector()) ** 2))
        if abs(norm - 1) > 1e-12:
            raise ValueError(f"two-qubit state not normalized: {norm!r}")

    def vector(self) -> np.ndarray:
        return np.array([self.A_uu, self.A_ud, self.A_du, self.A_dd], dtype=complex)

    def density(self) -> np.ndarray:
        v = self.vector()
        return np.outer(v, v.conj())

    @classmethod
    def from_vector(cls, v) -> "TwoQubitState":
        v = np.asarray(v, dtype=complex)
        return cls(*v)

    @classmethod
    def bell(cls) -> "TwoQubitState":
        """``(|ud> + |du>)/sqrt(2)``."""
        r = 1 / math.sqrt(2)
        return cls(0, r, r, 0)

    @classmethod
    def basis(cls, label: str) -> "TwoQubitState":
        v = np.zeros(4, dtype=complex)
        v[LABELS.index(label)] = 1
        return cls.from_vector(v)


@dataclass(frozen=True)
class TwoQubitAmplitudes:
    """Amplitudes ``G[s, n]`` at time ``t`` in the stated picture."""

    t: float
    G: np.ndarray
    picture: str = "interaction"

    @property
    def n_spins(self) -> int:
        return self.G.shape[1] - 1


def bath_links(n_spins: int) -> np.ndarray:
    """``<k+1|L_+|k>`` between bath states with ``k`` and ``k+1`` up spins, k = 0..N-1."""
    k = np.arange(n_spins)
    return np.sqrt(((n_spins - k) * (k + 1)).astype(float))


def energies(params: TwoQubitParams) -> np.ndarray:
    """Diagonal ``H0`` energies, shape ``(4, N+1)``."""
    v1 = _V1[:, None]
    v2 = _V2[:, None]
    m = np.arange(params.n_spins + 1)[None, :] - params.half
    return (
        0.5 * (v1 * params.omega1 + v2 * params.omega2)
        + 0.5 * params.Jp * v1 * v2
        + (params.g1p * v1 + params.g2p * v2) * m
    )


def flip_coupling(params: TwoQubitParams) -> np.ndarray:
    """Matrix of the flip terms ``H1`` on the flattened ``(4, N+1)`` amplitude vector."""
    M = params.n_spins + 1
    H = np.zeros((4 * M, 4 * M))
    idx = lambda row, n: row * M + n  # noqa: E731
    for n in range(M):
        H[idx(UD, n), idx(DU, n)] = H[idx(DU, n), idx(UD, n)] = params.J
    for k, c in enumerate(bath_links(params.n_spins)):
        # qubit flips down while the bath gains one up spin, and the reverse
        for row_up, row_down, g in ((UU, DU, params.g1), (UD, DD, params.g1), (UU, UD, params.g2), (DU, DD, params.g2)):
            H[idx(row_up, k), idx(row_down, k + 1)] = H[idx(row_down, k + 1), idx(row_up, k)] = g * c
    return H


def linear_system(params: TwoQubitParams) -> LinearSystem:
    return LinearSystem.from_dense(energies(params), flip_coupling(params))


def magnetization_blocks(n_spins: int) -> np.ndarray:
    """Label ``n + 1`` for every amplitude in block ``{uu[n-1], ud[n], du[n], dd[n+1]}``, shape ``(4, N+1)``.

    The flip terms only couple amplitudes inside one block.
    """
    return (np.arange(n_spins + 1)[None, :] + 1 + (_V1 + _V2)[:, None] // 2).astype(np.int64)


def eom_rhs(params: TwoQubitParams, t: float, G: np.ndarray) -> np.ndarray:
    """Time derivative of the interaction-picture amplitudes, shape ``(4, N+1)``.

    Boundary amplitudes that would need bath states outside ``0..N`` are
    absent from the coupling, which pins them to zero.
    """
    G = np.asarray(G, dtype=np.complex128)
    return linear_system(params).rhs(t, G).reshape(G.shape)


def initial_amplitudes(q0: TwoQubitState, bath0: BathState) -> np.ndarray:
    """``G[s, n](0) = A_s gamma_{N-n}``."""
    return np.outer(q0.vector(), bath0.by_excitation())


def integrate(
    params: TwoQubitParams,
    q0: TwoQubitState,
    bath0: BathState,
    t_grid,
    tol: float = 1e-9,
    max_step: float | None = None,
    budget: float | None = DEFAULT_BUDGET,
) -> list[TwoQubitAmplitudes]:
    """Propagate the interaction-picture amplitudes to every time in ``t_grid``.

    ``tol`` and ``budget`` are passed to :func:`centralspin.rk.dopri5`, which
    also holds every magnetization block at its initial norm.
    Raises :class:`centralspin.rk.IntegrationError` (carrying the failing
    time) if the step size collapses.
    """
    if bath0.n_spins != params.n_spins:
        raise ValueError(f"bath has {bath0.n_spins} spins but params specify {params.n_spins}")
    t_grid = np.asarray(t_grid, dtype=float)
    if t_grid[0] != 0:
        raise ValueError("t_grid must start at 0")
    if max_step is None:
        max_step = params.default_max_step()
    G0 = initial_amplitudes(q0, bath0)
    states = dopri5(
        linear_system(params),
        G0,
        t_grid,
        tol=tol,
        max_step=max_step,
        budget=budget,
        blocks=magnetization_blocks(params.n_spins),
    )
    shape = G0.shape
    return [TwoQubitAmplitudes(float(t), y.reshape(shape)) for t, y in zip(t_grid, states)]


def to_schrodinger(amplitudes: TwoQubitAmplitudes, params: TwoQubitParams) -> TwoQubitAmplitudes:
    """Undo the ``H0`` rotation: ``G~ = G exp(-i E t)``."""
    if amplitudes.picture == "schrodinger":
        return amplitudes
    phase = np.exp(-1j * energies(params) * amplitudes.t)
    return TwoQubitAmplitudes(amplitudes.t, amplitudes.G * phase, "schrodinger")


def _require_schrodinger(amplitudes: TwoQubitAmplitudes):
    if amplitudes.picture != "schrodinger":
        raise ValueError("reduced density matrices need Schrodinger-picture amplitudes; call to_schrodinger first")


def two_qubit_density(amplitudes: TwoQubitAmplitudes) -> np.ndarray:
    """Reduced two-qubit state in the basis ``uu, ud, du, dd``."""
    _require_schrodinger(amplitudes)
    G = amplitudes.G
    return G @ G.conj().T


def bath_density_2q(amplitudes: TwoQubitAmplitudes) -> np.ndarray:
    """Reduced bath state in the Dicke (down-flip) basis."""
    _require_schrodinger(amplitudes)
    G = amplitudes.G[:, ::-1]
    return G.T @ G.conj()


def magnetization(amplitudes: TwoQubitAmplitudes) -> float:
    """``<S1z + S2z + L_z>``; identical in either picture."""
    G = amplitudes.G
    N = G.shape[1] - 1
    m = 0.5 * (_V1 + _V2)[:, None] + (np.arange(N + 1) - N / 2)[None, :]
    return float(np.sum(np.abs(G) ** 2 * m))


def sector_norms(amplitudes: TwoQubitAmplitudes) -> np.ndarray:
    """Norm of each block ``{uu[n-1], ud[n], du[n], dd[n+1]}``, n = -1..N+1.

    The blocks are the rows of constant total magnetization; each norm is a
    constant of motion.
    """
    P = np.abs(amplitudes.G) ** 2
    N = P.shape[1] - 1
    out = np.zeros(N + 3)
    for n in range(-1, N + 2):
        total = 0.0
        if 0 <= n - 1 <= N:
            total += P[UU, n - 1]
        if 0 <= n <= N:
            total += P[UD, n] + P[DU, n]
        if 0 <= n + 1 <= N:
            total += P[DD, n + 1]
        out[n + 1] = total
    return out


