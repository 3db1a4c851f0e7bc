"""Two noninteracting qubits, each coupled to a bath of its own.

With a product initial state ``rho(0) x rho_B1 x rho_B2`` the joint qubit
state evolves under the tensor product of the two single-qubit channels:

    rho_{a a', b b'}(t) = sum Y1_{a b c d} Y2_{a' b' c' d'} rho_{c c', d d'}(0).

Two-qubit indices follow the ``uu, ud, du, dd`` order, qubit 1 first.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dicke_basis import BathState
from .measures import check_density_matrix
from .single_qubit import SingleQubitParams, channel

__all__ = ["JointInitialState", "compose", "compose_channels"]


@dataclass(frozen=True)
class JointInitialState:
    rho0: np.ndarray
    bath1: BathState
    bath2: BathState
    params1: SingleQubitParams
    params2: SingleQubitParams

    def __post_init__(self):
        object.__setattr__(self, "rho0", check_density_matrix(self.rho0))
        if self.rho0.shape != (4, 4):
            raise ValueError(f"two-qubit state must be 4x4, got {self.rho0.shape}")
        for label, bath, params in (("1", self.bath1, self.params1), ("2", self.bath2, self.params2)):
            if bath.n_spins != params.n_spins:
                raise ValueError(f"bath {label} has {bath.n_spins} spins but its params specify {params.n_spins}")


def compose_channels(Y1: np.ndarray, Y2: np.ndarray, rho0: np.ndarray) -> np.ndarray:
    """Apply ``Y1 x Y2`` to a 4x4 two-qubit density matrix."""
    rho = np.asarray(rho0, dtype=complex).reshape(2, 2, 2, 2)  # (c, c', d, d')
    out = np.einsum("abcd,ABCD,cCdD->aAbB", Y1, Y2, rho)
    return out.reshape(4, 4)


def compose(state: JointInitialState, t: float) -> np.ndarray:
    """Joint two-qubit density matrix at time ``t``."""
    Y1 = channel(state.params1, state.bath1, t)
    Y2 = channel(state.params2, state.bath2, t)
    return compose_channels(Y1, Y2, state.rho0)
