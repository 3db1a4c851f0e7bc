"""Brute-force reference dynamics for validating the fast paths.

Two independent constructions are provided:

* ``build_sector``: the Hamiltonian restricted to the symmetric bath sector,
  assembled from collective operators ``L_z, L_+, L_-`` acting on Dicke
  states and ordered by magnetization rows.
* ``build_full``: the literal ``2^(N+c)``-dimensional Hamiltonian built from
  tensor products of spin-1/2 matrices, with no symmetry assumption at all.

Both are propagated exactly by dense eigendecomposition.  Everything here is
deliberately slow and obvious.

Product-basis ordering: central qubits first, then bath spins 1..N; bit 0 is
spin up, bit 1 is spin down, most significant bit first.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from itertools import combinations

import numpy as np

from .dicke_basis import BathState, CapacityError, binomial
from .single_qubit import SingleQubitParams
from .two_qubit import TwoQubitParams

__all__ = [
    "MAX_FULL_SPINS",
    "SectorHamiltonian",
    "FullHamiltonian",
    "build_sector",
    "build_full",
    "propagate",
    "expm_taylor",
    "dicke_embedding",
    "product_state",
    "full_initial_state",
    "project_single",
    "project_two",
    "reduced_density",
    "bath_dicke_density",
    "collective_ops",
    "total_magnetization",
    "bath_l_squared",
]

MAX_FULL_SPINS = 12

_SX = np.array([[0, 0.5], [0.5, 0]], dtype=complex)
_SY = np.array([[0, -0.5j], [0.5j, 0]], dtype=complex)
_SZ = np.array([[0.5, 0], [0, -0.5]], dtype=complex)
_SP = np.array([[0, 1], [0, 0]], dtype=complex)
_SM = _SP.T.copy()
_I2 = np.eye(2, dtype=complex)


@dataclass(frozen=True)
class SectorHamiltonian:
    """Dense ``H`` on ``|qubits>|n up bath spins>`` in magnetization-row order.

    ``basis[i] = (row, n)`` where ``row`` indexes the qubit configuration
    (``0 = up, 1 = down`` for one qubit; ``0..3 = uu, ud, du, dd`` for two).
    """

    H: np.ndarray
    basis: tuple
    n_qubits: int
    n_spins: int

    def pack(self, amplitudes: np.ndarray) -> np.ndarray:
        """``(rows, N+1)`` amplitude array -> basis-ordered vector."""
        return np.array([amplitudes[r, n] for r, n in self.basis], dtype=complex)

    def unpack(self, vector: np.ndarray) -> np.ndarray:
        out = np.zeros((2**self.n_qubits, self.n_spins + 1), dtype=complex)
        for (r, n), value in zip(self.basis, vector):
            out[r, n] = value
        return out


@dataclass(frozen=True)
class FullHamiltonian:
    H: np.ndarray
    n_qubits: int
    bath_sizes: tuple


def collective_ops(n_spins: int):
    """``(L_z, L_+, L_-)`` on bath states indexed by up-spin count ``n``."""
    L = n_spins / 2
    n = np.arange(n_spins + 1)
    Lz = np.diag(n - L).astype(complex)
    Lp = np.zeros((n_spins + 1, n_spins + 1), dtype=complex)
    for k in range(n_spins):
        # <l, M+1|L_+|l, M> = sqrt((l - M)(l + M + 1)), M = k - L
        M = k - L
        Lp[k + 1, k] = np.sqrt((L - M) * (L + M + 1))
    return Lz, Lp, Lp.conj().T


def _kron(*ops):
    return reduce(np.kron, ops)


def _sector_order(n_qubits: int, n_spins: int):
    N = n_spins
    if n_qubits == 1:
        # rows: (down, 0); (up, n-1), (down, n); ...; (up, N)
        basis = [(1, 0)]
        for n in range(1, N + 1):
            basis += [(0, n - 1), (1, n)]
        basis.append((0, N))
        return basis
    basis = []
    for row in range(N + 3):
        for r, n in ((0, row - 2), (1, row - 1), (2, row - 1), (3, row)):
            if 0 <= n <= N:
                basis.append((r, n))
    return basis


def build_sector(params, n_qubits: int | None = None) -> SectorHamiltonian:
    """Hamiltonian on the symmetric (``l = N/2``) bath sector."""
    if n_qubits is None:
        n_qubits = 1 if isinstance(params, SingleQubitParams) else 2
    N = params.n_spins
    if N > 62:
        raise CapacityError("sector oracle supports N <= 62")
    Lz, Lp, Lm = collective_ops(N)
    Ib = np.eye(N + 1, dtype=complex)
    if n_qubits == 1:
        H = (
            params.omega1 * _kron(_SZ, Ib)
            + 2 * params.g1p * _kron(_SZ, Lz)
            + params.g1 * (_kron(_SP, Lm) + _kron(_SM, Lp))
        )
    elif n_qubits == 2:
        S1 = lambda op: _kron(op, _I2, Ib)  # noqa: E731
        S2 = lambda op: _kron(_I2, op, Ib)  # noqa: E731
        B = lambda op: _kron(_I2, _I2, op)  # noqa: E731
        p = params
        H = (
            p.omega1 * S1(_SZ)
            + p.omega2 * S2(_SZ)
            + 2 * p.Jp * S1(_SZ) @ S2(_SZ)
            + p.J * (S1(_SP) @ S2(_SM) + S1(_SM) @ S2(_SP))
            + 2 * p.g1p * S1(_SZ) @ B(Lz)
            + 2 * p.g2p * S2(_SZ) @ B(Lz)
            + p.g1 * (S1(_SP) @ B(Lm) + S1(_SM) @ B(Lp))
            + p.g2 * (S2(_SP) @ B(Lm) + S2(_SM) @ B(Lp))
        )
    else:
        raise ValueError("n_qubits must be 1 or 2")
    basis = _sector_order(n_qubits, N)
    # product index: qubit configuration major, bath up-count minor
    idx = [r * (N + 1) + n for r, n in basis]
    H = H[np.ix_(idx, idx)]
    return SectorHamiltonian(H, tuple(basis), n_qubits, N)


def _site_op(op, site: int, n_sites: int):
    ops = [_I2] * n_sites
    ops[site] = op
    return _kron(*ops)


def _xxz(i: int, j: int, n_sites: int, g: float, gp: float):
    """``2 g (Sx Sx + Sy Sy) + 2 gp Sz Sz`` between sites ``i`` and ``j``."""
    out = 0
    if g:
        out = out + 2 * g * (
            _site_op(_SX, i, n_sites) @ _site_op(_SX, j, n_sites)
            + _site_op(_SY, i, n_sites) @ _site_op(_SY, j, n_sites)
        )
    if gp:
        out = out + 2 * gp * _site_op(_SZ, i, n_sites) @ _site_op(_SZ, j, n_sites)
    return out


def build_full(params, n_qubits: int | None = None, individual: bool = False) -> FullHamiltonian:
    """Literal product-space Hamiltonian.

    ``params`` is a :class:`SingleQubitParams` (one qubit), a
    :class:`TwoQubitParams` (two qubits, common bath), or, with
    ``individual=True``, a pair of :class:`SingleQubitParams`, one per
    qubit-bath copy.
    """
    if individual:
        p1, p2 = params
        sizes = (p1.n_spins, p2.n_spins)
        n_sites = 2 + sum(sizes)
        if n_sites > MAX_FULL_SPINS:
            raise CapacityError(f"full-space oracle capped at {MAX_FULL_SPINS} spins, got {n_sites}")
        dim = 2**n_sites
        H = np.zeros((dim, dim), dtype=complex)
        offset = 2
        for q, p in enumerate((p1, p2)):
            H += p.omega1 * _site_op(_SZ, q, n_sites)
            for j in range(offset, offset + p.n_spins):
                H += _xxz(q, j, n_sites, p.g1, p.g1p)
            offset += p.n_spins
        return FullHamiltonian(H, 2, sizes)

    if n_qubits is None:
        n_qubits = 1 if isinstance(params, SingleQubitParams) else 2
    N = params.n_spins
    n_sites = n_qubits + N
    if n_sites > MAX_FULL_SPINS:
        raise CapacityError(f"full-space oracle capped at {MAX_FULL_SPINS} spins, got {n_sites}")
    dim = 2**n_sites
    H = np.zeros((dim, dim), dtype=complex)
    bath = range(n_qubits, n_sites)
    if n_qubits == 1:
        H += params.omega1 * _site_op(_SZ, 0, n_sites)
        for j in bath:
            H += _xxz(0, j, n_sites, params.g1, params.g1p)
    elif n_qubits == 2:
        p = params
        H += p.omega1 * _site_op(_SZ, 0, n_sites) + p.omega2 * _site_op(_SZ, 1, n_sites)
        H += _xxz(0, 1, n_sites, p.J, p.Jp)
        for j in bath:
            H += _xxz(0, j, n_sites, p.g1, p.g1p)
            H += _xxz(1, j, n_sites, p.g2, p.g2p)
    else:
        raise ValueError("n_qubits must be 1 or 2")
    return FullHamiltonian(H, n_qubits, (N,))


def propagate(H, psi0: np.ndarray, t):
    """``exp(-i H t) psi0`` by eigendecomposition.

    ``t`` may be a scalar or a 1-d array; for an array the result has one row
    per time.
    """
    H = H.H if isinstance(H, (SectorHamiltonian, FullHamiltonian)) else np.asarray(H)
    w, v = np.linalg.eigh(H)
    c = v.conj().T @ np.asarray(psi0, dtype=complex)
    t_arr = np.atleast_1d(np.asarray(t, dtype=float))
    out = (np.exp(-1j * np.outer(t_arr, w)) * c) @ v.T
    return out[0] if np.ndim(t) == 0 else out


def expm_taylor(H: np.ndarray, t: float, order: int = 30) -> np.ndarray:
    """``exp(-i H t)`` by scaling and squaring a truncated Taylor series."""
    X = -1j * t * np.asarray(H, dtype=complex)
    norm = np.linalg.norm(X, 1)
    squarings = max(0, int(np.ceil(np.log2(norm))) + 1) if norm > 0.5 else 0
    X = X / 2**squarings
    term = np.eye(len(X), dtype=complex)
    out = term.copy()
    for k in range(1, order + 1):
        term = term @ X / k
        out = out + term
    for _ in range(squarings):
        out = out @ out
    return out


def dicke_embedding(n_spins: int) -> np.ndarray:
    """Columns are ``|m>_D`` (m down-flips) expanded in the ``2^N`` product basis."""
    if n_spins > MAX_FULL_SPINS:
        raise CapacityError(f"embedding capped at {MAX_FULL_SPINS} spins")
    D = np.zeros((2**n_spins, n_spins + 1))
    for m in range(n_spins + 1):
        norm = np.sqrt(binomial(n_spins, m))
        for downs in combinations(range(n_spins), m):
            index = sum(1 << (n_spins - 1 - j) for j in downs)
            D[index, m] = 1 / norm
    return D


def product_state(*factors) -> np.ndarray:
    return _kron(*[np.asarray(f, dtype=complex) for f in factors])


def full_initial_state(qubits: np.ndarray, *baths: BathState) -> np.ndarray:
    """Qubit vector (length 2 or 4) tensored with Dicke-superposition bath(s)."""
    vecs = [dicke_embedding(b.n_spins) @ b.gamma for b in baths]
    return product_state(qubits, *vecs)


def project_single(psi: np.ndarray, n_spins: int) -> np.ndarray:
    """Full one-qubit state -> ``(2, N+1)`` amplitudes on ``|s>|N-n>_D``."""
    D = dicke_embedding(n_spins)[:, ::-1]  # column n = |N-n>_D
    return psi.reshape(2, -1) @ D


def project_two(psi: np.ndarray, n_spins: int) -> np.ndarray:
    """Full two-qubit state -> ``(4, N+1)`` amplitudes on ``|s1 s2>|N-n>_D``."""
    D = dicke_embedding(n_spins)[:, ::-1]
    return psi.reshape(4, -1) @ D


def reduced_density(psi: np.ndarray, keep, n_sites: int) -> np.ndarray:
    """Partial trace of ``|psi><psi|`` onto the listed sites (in that order)."""
    keep = list(keep)
    traced = [s for s in range(n_sites) if s not in keep]
    tensor = np.asarray(psi).reshape([2] * n_sites)
    tensor = np.transpose(tensor, keep + traced).reshape(2 ** len(keep), -1)
    return tensor @ tensor.conj().T


def bath_dicke_density(psi: np.ndarray, n_qubits: int, n_spins: int) -> np.ndarray:
    """Bath reduced density matrix expressed in the Dicke (down-flip) basis."""
    D = dicke_embedding(n_spins)
    M = psi.reshape(2**n_qubits, -1) @ D  # rows: qubit configs, cols: m
    return M.T @ M.conj()


def total_magnetization(n_sites: int) -> np.ndarray:
    return sum(_site_op(_SZ, s, n_sites) for s in range(n_sites))


def bath_l_squared(n_sites: int, bath_sites) -> np.ndarray:
    out = 0
    for op in (_SX, _SY, _SZ):
        L = sum(_site_op(op, s, n_sites) for s in bath_sites)
        out = out + L @ L
    return out
