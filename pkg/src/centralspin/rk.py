"""Adaptive Dormand-Prince 5(4) integration of interaction-picture Schrodinger equations.

The two-qubit amplitude equations (and, written the same way, the one-qubit
equations) have the form

    dy/dt = -i exp(i E t) H1 exp(-i E t) y,

with a diagonal energy vector ``E`` (the non-flipping part of ``H``) and a
sparse hermitian coupling ``H1`` (the flip terms).  Fixing that form lets the
whole stepping loop be compiled once and cached by numba; passing arbitrary
Python callables would force a recompile in every process.

Output times are hit exactly by clipping the step, not by interpolation, so
a fixed grid and tolerance always reproduce the same numbers.

Dormand-Prince loses norm slowly.  When the caller names invariant blocks
(sets of components that ``H1`` never couples to anything outside), each
accepted step is followed by rescaling every block back to its initial norm.
The exact flow conserves those norms, so the projection keeps the order of
the method and removes the drift in every conserved quantity built from them.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numba import njit

__all__ = ["DEFAULT_BUDGET", "IntegrationError", "LinearSystem", "dopri5"]

_SAFETY = 0.9
_MIN_FACTOR = 0.2
_MAX_FACTOR = 5.0
_TAYLOR_MAX = 0.05
_RESYNC = 16
# summed local error allowance over a whole run, in units of tol
DEFAULT_BUDGET = 100.0


class IntegrationError(RuntimeError):
    """Step size collapsed; ``t`` is where the integrator gave up."""

    def __init__(self, t: float, h: float):
        super().__init__(f"step size underflow at t={t!r} (h={h!r})")
        self.t = t
        self.h = h


@dataclass(frozen=True)
class LinearSystem:
    """``H1`` in CSR form plus the diagonal energies ``E``."""

    energies: np.ndarray
    indptr: np.ndarray
    indices: np.ndarray
    data: np.ndarray

    @classmethod
    def from_dense(cls, energies, coupling) -> "LinearSystem":
        coupling = np.asarray(coupling, dtype=np.complex128)
        energies = np.ascontiguousarray(energies, dtype=float).ravel()
        if coupling.shape != (energies.size, energies.size):
            raise ValueError("coupling must be square and match the energy vector")
        rows, cols = np.nonzero(coupling)
        counts = np.bincount(rows, minlength=energies.size)
        indptr = np.concatenate([[0], np.cumsum(counts)]).astype(np.int64)
        return cls(energies, indptr, cols.astype(np.int64), np.ascontiguousarray(coupling[rows, cols]))

    @property
    def size(self) -> int:
        return self.energies.size

    def rhs(self, t: float, y) -> np.ndarray:
        y = np.ascontiguousarray(y, dtype=np.complex128).ravel()
        return _rhs(float(t), y, self.energies, self.indptr, self.indices, self.data)


@njit(cache=True)
def _rhs(t, y, energies, indptr, indices, data):
    phase = np.exp(1j * t * energies)
    x = phase.conj() * y
    out = np.empty_like(y)
    for r in range(y.size):
        acc = 0j
        for p in range(indptr[r], indptr[r + 1]):
            acc += data[p] * x[indices[p]]
        out[r] = -1j * phase[r] * acc
    return out


@njit(cache=True)
def _tableau():
    """Dormand & Prince (1980) coefficients; row 6 of ``A`` is the 5th-order solution (FSAL)."""
    C = np.array([0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0])
    A = np.zeros((7, 7))
    A[1, 0] = 1 / 5
    A[2, 0], A[2, 1] = 3 / 40, 9 / 40
    A[3, 0], A[3, 1], A[3, 2] = 44 / 45, -56 / 15, 32 / 9
    A[4, 0], A[4, 1], A[4, 2], A[4, 3] = 19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729
    A[5, 0], A[5, 1], A[5, 2], A[5, 3], A[5, 4] = 9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656
    A[6, 0], A[6, 2], A[6, 3], A[6, 4], A[6, 5] = 35 / 384, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84
    B4 = np.array([5179 / 57600, 0.0, 7571 / 16695, 393 / 640, -92097 / 339200, 187 / 2100, 1 / 40])
    E = -B4
    for s in range(6):
        E[s] += A[6, s]
    return C, A, E


@njit(cache=True)
def _exact_phases(t, energies, p0):
    for q in range(energies.size):
        x = energies[q] * t
        p0[q] = complex(np.cos(x), np.sin(x))


@njit(cache=True)
def _stage_phases(p0, step, energies, ph, emax):
    """Phases ``exp(i E (t + c step))`` at the seven stage nodes, given ``p0 = exp(i E t)``.

    The nodes 0, 1/5, 3/10, 4/5, 8/9, 1 are the multiples 0, 18, 27, 72, 80, 90
    of ``step/90``, so one small rotation and a few products replace six
    trigonometric evaluations per component.
    """
    small = emax * abs(step) / 90.0 <= _TAYLOR_MAX
    for q in range(energies.size):
        a = energies[q] * step / 90.0
        if small:
            # truncation error below 1e-19 for |a| <= 0.05
            a2 = a * a
            c = 1.0 - a2 / 2 * (1.0 - a2 / 12 * (1.0 - a2 / 30 * (1.0 - a2 / 56)))
            s = a * (1.0 - a2 / 6 * (1.0 - a2 / 20 * (1.0 - a2 / 42 * (1.0 - a2 / 72))))
        else:
            c = np.cos(a)
            s = np.sin(a)
        u = complex(c, s)
        u2 = u * u
        u8 = (u2 * u2) * (u2 * u2)
        u16 = u8 * u8
        u64 = (u16 * u16) * (u16 * u16)
        u18 = u16 * u2
        u80 = u64 * u16
        p = p0[q]
        ph[0, q] = p
        ph[1, q] = p * u18
        ph[2, q] = p * (u18 * u8 * u)
        ph[3, q] = p * (u64 * u8)
        ph[4, q] = p * u80
        ph[5, q] = p * (u80 * u8 * u2)
        ph[6, q] = ph[5, q]


@njit(cache=True)
def _rhs_into(out, y, ph, x, indptr, indices, data):
    for q in range(y.size):
        x[q] = ph[q].conjugate() * y[q]
    for r in range(y.size):
        acc = 0j
        for p in range(indptr[r], indptr[r + 1]):
            acc += data[p] * x[indices[p]]
        out[r] = complex(acc.imag, -acc.real) * ph[r]


@njit(cache=True)
def _project(y, k0, blocks, norm0, norm):
    """Rescale each block of ``y`` to its initial norm; ``k0 = f(y)`` scales with it (f is linear and block-diagonal)."""
    norm[:] = 0.0
    for q in range(y.size):
        norm[blocks[q]] += y[q].real * y[q].real + y[q].imag * y[q].imag
    for b in range(norm.size):
        norm[b] = np.sqrt(norm0[b] / norm[b]) if norm[b] > 0.0 else 1.0
    for q in range(y.size):
        y[q] *= norm[blocks[q]]
        k0[q] *= norm[blocks[q]]


@njit(cache=True)
def _dopri5_kernel(y0, t_grid, tol, per_time, max_step, h, energies, indptr, indices, data, blocks, norm0):
    C, A, E = _tableau()
    n = y0.size
    m = 2 * n
    emax = np.max(np.abs(energies)) if n > 0 else 0.0
    out = np.empty((t_grid.size, n), dtype=np.complex128)
    y = y0.copy()
    yi = np.empty(n, dtype=np.complex128)
    x = np.empty(n, dtype=np.complex128)
    k = np.empty((7, n), dtype=np.complex128)
    ph = np.empty((7, n), dtype=np.complex128)
    p0 = np.empty(n, dtype=np.complex128)
    norm = np.empty(norm0.size)
    # real-imaginary split views for the stage sums and the error norm
    yf = y.view(np.float64)
    yif = yi.view(np.float64)
    kf = k.view(np.float64)
    t = t_grid[0]
    out[0] = y
    _exact_phases(t, energies, p0)
    _stage_phases(p0, 0.0, energies, ph, emax)
    _rhs_into(k[0], y, ph[0], x, indptr, indices, data)
    steps = 0
    since_sync = 0
    for j in range(1, t_grid.size):
        target = t_grid[j]
        while t < target:
            h = min(h, max_step)
            last = t + h >= target
            step = target - t if last else h
            _stage_phases(p0, step, energies, ph, emax)
            for i in range(1, 7):
                for q in range(m):
                    yif[q] = yf[q]
                for s in range(i):
                    c = step * A[i, s]
                    if c != 0.0:
                        for q in range(m):
                            yif[q] += c * kf[s, q]
                _rhs_into(k[i], yi, ph[i], x, indptr, indices, data)
            err = 0.0
            for q in range(m):
                acc = 0.0
                for s in range(7):
                    acc += E[s] * kf[s, q]
                err = max(err, abs(acc))
            err *= step
            # error per unit step: per_time > 0 also caps the local error at per_time * step
            target_err = min(tol, per_time * step) if per_time > 0 else tol
            accepted = err <= target_err
            if accepted:
                t = target if last else t + step
                for q in range(m):
                    yf[q] = yif[q]
                    kf[0, q] = kf[6, q]
                if blocks.size > 0:
                    _project(y, k[0], blocks, norm0, norm)
                steps += 1
                since_sync += 1
                # products drift by an ulp per step; recompute the phases exactly now and then
                if last or since_sync >= _RESYNC:
                    _exact_phases(t, energies, p0)
                    since_sync = 0
                else:
                    for q in range(n):
                        p0[q] = ph[6, q]
            if err == 0.0:
                factor = _MAX_FACTOR
            else:
                factor = min(_MAX_FACTOR, max(_MIN_FACTOR, _SAFETY * (target_err / err) ** 0.2))
            h_new = step * factor
            # a clipped landing step says nothing about the natural step size
            if last and accepted:
                h = max(h, h_new)
            else:
                h = h_new
            if h < 1e-14 * max(1.0, abs(t)):
                return out, -1, t, h
        out[j] = y
    return out, steps, t, h


def dopri5(
    system: LinearSystem,
    y0,
    t_grid,
    tol: float = 1e-9,
    max_step: float = np.inf,
    first_step: float | None = None,
    budget: float | None = DEFAULT_BUDGET,
    blocks=None,
) -> np.ndarray:
    """Integrate ``system`` from ``y0``; returns ``y`` at every grid time, shape ``(len(t_grid), n)``.

    The local error estimate (max-norm over real and imaginary parts) is
    kept below ``tol`` on every accepted step.  With a ``budget`` it is also
    kept below ``budget * tol * step / span``, so the estimates summed over
    the whole run stay under ``budget * tol`` however long the run is.
    ``budget=None`` gives plain per-step control.  ``blocks`` optionally
    assigns each component an integer block label for the norm projection;
    the caller guarantees that ``H1`` has no entries between blocks.
    ``t_grid`` must be non-decreasing.
    """
    t_grid = np.ascontiguousarray(t_grid, dtype=float)
    if t_grid.ndim != 1 or len(t_grid) == 0:
        raise ValueError("t_grid must be a non-empty 1-d sequence")
    if np.any(np.diff(t_grid) < 0):
        raise ValueError("t_grid must be non-decreasing")
    if not tol > 0:
        raise ValueError("tol must be positive")
    y0 = np.ascontiguousarray(y0, dtype=np.complex128).ravel()
    if y0.size != system.size:
        raise ValueError(f"state has {y0.size} components, system has {system.size}")
    if budget is not None and not budget > 0:
        raise ValueError("budget must be positive or None")
    if blocks is None:
        blocks = np.zeros(0, dtype=np.int64)
        norm0 = np.zeros(0)
    else:
        blocks = np.ascontiguousarray(blocks, dtype=np.int64).ravel()
        if blocks.size != y0.size or (blocks.size and blocks.min() < 0):
            raise ValueError("blocks must give a non-negative label for every component")
        norm0 = np.bincount(blocks, weights=np.abs(y0) ** 2).astype(float)
    span = float(t_grid[-1] - t_grid[0])
    per_time = budget * tol / span if budget is not None and span > 0 else 0.0
    h0 = first_step if first_step is not None else min(max_step, 1e-3)
    out, status, t_fail, h = _dopri5_kernel(
        y0,
        t_grid,
        float(tol),
        float(per_time),
        float(max_step),
        float(h0),
        system.energies,
        system.indptr,
        system.indices,
        system.data,
        blocks,
        norm0,
    )
    if status < 0:
        raise IntegrationError(float(t_fail), float(h))
    return out
