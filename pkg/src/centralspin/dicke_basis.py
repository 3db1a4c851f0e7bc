"""Symmetric Dicke-state bath superpositions and two-site matrix elements.

Conventions
-----------
A bath of ``N`` spin-1/2 particles restricted to the maximal angular momentum
sector ``l = N/2`` is spanned by the Dicke states ``|m>_D``, where ``m`` counts
down-flips relative to the all-up state.  A :class:`BathState` stores the
coefficients ``gamma[m]`` in that ordering.

The dynamics modules instead index bath states by the number of *up* spins
``n`` (``|N - n>_D``).  The translation ``gamma_{N-n}`` is owned here, by
:meth:`BathState.gamma_for_excitation` and :meth:`BathState.by_excitation`;
nothing else should reverse the coefficient vector by hand.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "MAX_BINOMIAL_N",
    "MAX_BATH_SPINS",
    "CapacityError",
    "binomial",
    "BathState",
    "spin_coherent",
    "equally_weighted",
    "w_class",
    "fully_polarized",
    "PairElementTable",
    "pair_elements",
]

MAX_BINOMIAL_N = 64
MAX_BATH_SPINS = 62

_NORM_TOL = 1e-12


class CapacityError(ValueError):
    """Requested size lies outside the exactly supported range."""


def binomial(n: int, k: int) -> int:
    """Exact binomial coefficient with ``C(n, k) = 0`` for ``k < 0`` or ``k > n``."""
    if n < 0:
        raise ValueError(f"binomial requires n >= 0, got n={n}")
    if n > MAX_BINOMIAL_N:
        raise CapacityError(f"binomial supports n <= {MAX_BINOMIAL_N}, got n={n}")
    if k < 0 or k > n:
        return 0
    return math.comb(n, k)


@dataclass(frozen=True)
class BathState:
    """Normalized superposition ``sum_m gamma[m] |m>_D`` of the N+1 Dicke states."""

    n_spins: int
    gamma: np.ndarray = field(repr=False)

    def __post_init__(self):
        n = self.n_spins
        if not isinstance(n, (int, np.integer)) or n < 1:
            raise ValueError(f"n_spins must be a positive integer, got {n!r}")
        if n > MAX_BATH_SPINS:
            raise CapacityError(f"bath size capped at {MAX_BATH_SPINS} spins, got {n}")
        gamma = np.array(self.gamma, dtype=complex)
        if gamma.shape != (n + 1,):
            raise ValueError(f"gamma must have length N+1={n + 1}, got shape {gamma.shape}")
        norm = float(np.sum(np.abs(gamma) ** 2))
        if abs(norm - 1.0) > _NORM_TOL:
            raise ValueError(f"bath amplitudes not normalized: sum |gamma|^2 = {norm!r}")
        gamma.setflags(write=False)
        object.__setattr__(self, "n_spins", int(n))
        object.__setattr__(self, "gamma", gamma)

    @property
    def half(self) -> float:
        """``L = N/2``, the collective spin length."""
        return self.n_spins / 2

    def gamma_for_excitation(self, n: int) -> complex:
        """Coefficient of the bath state with ``n`` up spins, ``gamma_{N-n}``.

        Out-of-range ``n`` gives 0, which is what every boundary term of the
        closed-form solution needs.
        """
        m = self.n_spins - n
        if 0 <= m <= self.n_spins:
            return complex(self.gamma[m])
        return 0j

    def by_excitation(self) -> np.ndarray:
        """All coefficients reindexed by up-spin count: ``out[n] = gamma_{N-n}``."""
        return self.gamma[::-1].copy()

    def density(self) -> np.ndarray:
        """Projector ``|phi_B><phi_B|`` in the Dicke (down-flip) basis."""
        return np.outer(self.gamma, self.gamma.conj())


def spin_coherent(n_spins: int, theta: float, phi: float = 0.0) -> BathState:
    """Spin coherent state obtained by rotating the all-up state by ``(theta, phi)``.

    Uses ``gamma_m = Q_{N-m}`` with ``Q_n = z^n sqrt(C(N, n)) / (1 + |z|^2)^(N/2)``
    and ``z = cot(theta/2) exp(-i phi)``, written in the equivalent
    ``cos^n(theta/2) sin^(N-n)(theta/2)`` form.  The global phase
    ``exp(i phi N / 2)`` of the rotated product state is dropped.
    """
    if not 0.0 <= theta <= math.pi:
        raise ValueError(f"theta must lie in [0, pi], got {theta!r}")
    if theta == 0.0:
        return fully_polarized(n_spins, 0)
    if theta == math.pi:
        return fully_polarized(n_spins, n_spins)

    c, s = math.cos(theta / 2), math.sin(theta / 2)
    q = np.empty(n_spins + 1, dtype=complex)
    for n in range(n_spins + 1):
        mag = math.sqrt(binomial(n_spins, n)) * c**n * s ** (n_spins - n)
        q[n] = mag * complex(math.cos(n * phi), -math.sin(n * phi))
    # renormalize away the last-ulp drift of the binomial sum
    q /= np.linalg.norm(q)
    return BathState(n_spins, q[::-1])


def equally_weighted(n_spins: int) -> BathState:
    """Equal-amplitude superposition of all N+1 Dicke states."""
    if n_spins < 2:
        raise ValueError("equally weighted bath needs at least 2 spins")
    return BathState(n_spins, np.full(n_spins + 1, 1 / math.sqrt(n_spins + 1)))


def w_class(n_spins: int, gamma_nm1: complex, gamma_n: complex) -> BathState:
    """Superposition of the one-up-spin (``m = N-1``) and all-down (``m = N``) states."""
    norm = abs(gamma_nm1) ** 2 + abs(gamma_n) ** 2
    if abs(norm - 1.0) > _NORM_TOL:
        raise ValueError(f"|gamma_(N-1)|^2 + |gamma_N|^2 must be 1, got {norm!r}")
    gamma = np.zeros(n_spins + 1, dtype=complex)
    gamma[n_spins - 1] = gamma_nm1
    gamma[n_spins] = gamma_n
    return BathState(n_spins, gamma)


def fully_polarized(n_spins: int, m: int = 0) -> BathState:
    """Single Dicke state ``|m>_D`` (``m = 0`` is all up)."""
    if not 0 <= m <= n_spins:
        raise ValueError(f"Dicke index must satisfy 0 <= m <= N={n_spins}, got {m}")
    gamma = np.zeros(n_spins + 1, dtype=complex)
    gamma[m] = 1.0
    return BathState(n_spins, gamma)


@dataclass(frozen=True)
class PairElementTable:
    """Dicke-basis matrix elements of two-site operators on bath spins 1 and 2.

    Every array is indexed by the down-flip number ``m = 0..N``:

    ``up_up``     ``<m|T1+T1- T2+T2-|m>``
    ``flip``      ``<m|T1+T1- T2-T2+|m> = <m|T1-T1+ T2+T2-|m> = <m|T1- T2+|m>``
    ``down_down`` ``<m|T1-T1+ T2-T2+|m>``
    ``step_up``   ``<m+1|T1+T1- T2-|m> = <m+1|T1- T2+T2-|m>``
    ``step_down`` ``<m+1|T1- T2-T2+|m> = <m+1|T1-T1+ T2-|m>``
    ``double``    ``<m+2|T1- T2-|m>``

    Entries whose target state ``m+1`` or ``m+2`` does not exist are 0.
    """

    n_spins: int
    up_up: np.ndarray
    flip: np.ndarray
    down_down: np.ndarray
    step_up: np.ndarray
    step_down: np.ndarray
    double: np.ndarray


def pair_elements(n_spins: int) -> PairElementTable:
    """Nonvanishing two-site matrix elements from exact binomial ratios."""
    if n_spins < 2:
        raise ValueError("pair elements need at least 2 bath spins")
    N = n_spins
    up_up, flip, down_down = (np.zeros(N + 1) for _ in range(3))
    step_up, step_down, double = (np.zeros(N + 1) for _ in range(3))
    for m in range(N + 1):
        cm = binomial(N, m)
        up_up[m] = binomial(N - 2, m) / cm
        flip[m] = binomial(N - 2, m - 1) / cm
        down_down[m] = binomial(N - 2, m - 2) / cm
        if m + 1 <= N:
            root = math.sqrt(binomial(N, m + 1) * cm)
            step_up[m] = binomial(N - 2, m) / root
            step_down[m] = binomial(N - 2, m - 1) / root
        if m + 2 <= N:
            double[m] = binomial(N - 2, m) / math.sqrt(binomial(N, m + 2) * cm)
    return PairElementTable(N, up_up, flip, down_down, step_up, step_down, double)
