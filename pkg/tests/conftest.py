import numpy as np
import pytest

from centralspin.dicke_basis import BathState


def random_bath(rng, n_spins: int) -> BathState:
    g = rng.normal(size=n_spins + 1) + 1j * rng.normal(size=n_spins + 1)
    return BathState(n_spins, g / np.linalg.norm(g))


def random_unit(rng, size: int) -> np.ndarray:
    v = rng.normal(size=size) + 1j * rng.normal(size=size)
    return v / np.linalg.norm(v)


def random_density(rng, dim: int, rank: int | None = None) -> np.ndarray:
    rank = dim if rank is None else rank
    X = rng.normal(size=(dim, rank)) + 1j * rng.normal(size=(dim, rank))
    rho = X @ X.conj().T
    return rho / np.trace(rho).real


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def single_qubit_system(params):
    """Interaction-picture linear system for one qubit, built from H0 energies and flip terms.

    Flattened layout: index ``s * (N+1) + n`` for qubit ``s`` (0 up, 1 down)
    and ``n`` bath up spins.  Independent of the closed-form solution.
    """
    from centralspin.rk import LinearSystem

    N = params.n_spins
    M = N + 1
    n = np.arange(M)
    half_z = n - N / 2
    E = np.concatenate([0.5 * params.omega1 + params.g1p * half_z, -0.5 * params.omega1 - params.g1p * half_z])
    H1 = np.zeros((2 * M, 2 * M))
    for k in range(1, M):
        # <up, k-1| g S+ L- |down, k> = g sqrt(k (N - k + 1))
        H1[k - 1, M + k] = H1[M + k, k - 1] = params.g1 * np.sqrt(k * (N - k + 1))
    return LinearSystem.from_dense(E, H1), E


def gauss_legendre_tableau(stages: int):
    """Nodes, coefficient matrix and weights of the implicit Gauss-Legendre method (order 2s)."""
    from numpy.polynomial import Polynomial
    from numpy.polynomial.legendre import leggauss

    x, w = leggauss(stages)
    c = (x + 1) / 2
    A = np.empty((stages, stages))
    for j in range(stages):
        ell = Polynomial.fromroots(np.delete(c, j))
        A[:, j] = (ell / ell(c[j])).integ()(c)
    return c, A, w / 2


def sector_rk_oracle(params, q0, bath0, n_steps: int, h: float, stages: int = 6):
    """Gauss-Legendre Runge-Kutta solution of the per-sector single-qubit equations.

    Sector n holds the interaction-picture pair (F_up[n-1], F_down[n]) with
    i dF_up/dt = a_n exp(i b_n t) F_down and i dF_down/dt = a_n exp(-i b_n t) F_up.
    A step from time t is the step from 0 conjugated by diag(exp(+-i b_n t/2)),
    so in the co-rotating frame every step applies the same matrix and the
    stage equations are solved once.  Returns Schrodinger-picture
    (F_up, F_down) at t = 0, h, ..., n_steps h, each of shape (n_steps+1, N+1).
    """
    N = params.n_spins
    n = np.arange(N + 2)
    a = params.g1 * np.sqrt(n * (N + 1 - n))
    b = params.omega1 + params.g1p * (2 * n - N - 1)
    c, A, w = gauss_legendre_tableau(stages)
    S = n.size

    # M[n, j] = coefficient matrix at t = c_j h
    phase = np.exp(1j * np.outer(b, c * h))
    M = np.zeros((S, stages, 2, 2), dtype=complex)
    M[:, :, 0, 1] = -1j * a[:, None] * phase
    M[:, :, 1, 0] = -1j * a[:, None] * phase.conj()
    # stage values Y_i = y + h sum_j A_ij M_j Y_j, for y = each unit vector
    L = np.eye(2 * stages) - h * np.einsum("ij,njxy->nixjy", A, M).reshape(S, 2 * stages, 2 * stages)
    Y = np.linalg.solve(L, np.tile(np.eye(2), (stages, 1))[None]).reshape(S, stages, 2, 2)
    R = np.eye(2) + h * np.einsum("i,nixy,niyz->nxz", w, M, Y)
    rot = np.exp(-0.5j * b * h)
    step = np.stack([rot, rot.conj()], axis=1)[:, :, None] * R

    Q = np.zeros(N + 3, dtype=complex)
    Q[1 : N + 2] = bath0.by_excitation()
    z = np.stack([q0.f_up * Q[0 : N + 2], q0.f_down * Q[1 : N + 3]], axis=1)
    out = np.empty((n_steps + 1, S, 2), dtype=complex)
    out[0] = z
    for k in range(n_steps):
        z = np.einsum("nxy,ny->nx", step, z)
        out[k + 1] = z

    t = h * np.arange(n_steps + 1)
    half = 0.5 * np.outer(t, b)
    up = out[:, 1:, 0] * np.exp(1j * half[:, 1:])
    down = out[:, :-1, 1] * np.exp(-1j * half[:, :-1])
    # interaction -> Schrodinger: multiply by exp(-i E t) with E the diagonal energies
    k_up = np.arange(N + 1) - N / 2
    E_up = 0.5 * params.omega1 + params.g1p * k_up
    return up * np.exp(-1j * np.outer(t, E_up)), down * np.exp(1j * np.outer(t, E_up))


# one line per acceptance criterion, echoed in the terminal summary
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
