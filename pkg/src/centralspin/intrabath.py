"""Reduced state and entanglement of a pair of bath spins.

The bath stays in the permutation-symmetric sector, so every pair of bath
spins has the same reduced state.  In the basis ``++, +-, -+, --`` it takes
the form

    [[p1,   p3,   p3,   p4 ],
     [p3*,  p2,   p2,   p5 ],
     [p3*,  p2,   p2,   p5 ],
     [p4*,  p5*,  p5*,  1 - p1 - 2 p2]]

where each ``p`` is a sum over bath density-matrix elements weighted by the
two-site Dicke matrix elements of :func:`centralspin.dicke_basis.pair_elements`.
Bath density matrices are in the Dicke down-flip basis ``|m>_D``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dicke_basis import pair_elements
from .measures import INVALID_TOL, check_density_matrix, concurrence

__all__ = ["PairDensity", "pair_density", "pair_concurrence", "reduced_concurrence", "ZERO_CONCURRENCE"]

# initial concurrences at or below this are round-off; normalizing by them is meaningless
ZERO_CONCURRENCE = 1e-12


@dataclass(frozen=True)
class PairDensity:
    p1: float
    p2: float
    p3: complex
    p4: complex
    p5: complex

    @property
    def chi(self) -> np.ndarray:
        p1, p2, p3, p4, p5 = self.p1, self.p2, self.p3, self.p4, self.p5
        p3c, p4c, p5c = np.conj(p3), np.conj(p4), np.conj(p5)
        return np.array(
            [
                [p1, p3, p3, p4],
                [p3c, p2, p2, p5],
                [p3c, p2, p2, p5],
                [p4c, p5c, p5c, 1 - p1 - 2 * p2],
            ],
            dtype=complex,
        )


def pair_density(rho_B) -> PairDensity:
    """Two-spin reduced state of a symmetric bath.

    ``rho_B`` is validated only to the integrator-drift level, so states
    propagated numerically are accepted as they come.
    """
    rho_B = check_density_matrix(rho_B, tol=INVALID_TOL)
    N = rho_B.shape[0] - 1
    el = pair_elements(N)
    diag = np.diag(rho_B).real
    # rho_B[m, m+1] pairs the bra m with the ket m+1, i.e. <m|rho|m+1>
    sup1 = np.append(np.diag(rho_B, 1), 0)
    sup2 = np.append(np.diag(rho_B, 2), [0, 0])
    return PairDensity(
        p1=float(np.sum(diag * el.up_up)),
        p2=float(np.sum(diag * el.flip)),
        p3=complex(np.sum(sup1 * el.step_up)),
        p4=complex(np.sum(sup2 * el.double)),
        p5=complex(np.sum(sup1 * el.step_down)),
    )


def pair_concurrence(chi: PairDensity) -> float:
    return concurrence(chi.chi)


def reduced_concurrence(chi_t: PairDensity, chi_0: PairDensity) -> float:
    """Pair concurrence normalized to its initial value."""
    c0 = pair_concurrence(chi_0)
    if c0 <= ZERO_CONCURRENCE:
        raise ValueError("initial pair concurrence is zero; reduced concurrence is undefined")
    return pair_concurrence(chi_t) / c0
