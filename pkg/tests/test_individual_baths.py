import numpy as np
import pytest

from centralspin.dicke_basis import spin_coherent
from centralspin.individual_baths import JointInitialState, compose, compose_channels
from centralspin.measures import check_density_matrix, concurrence
from centralspin.oracle import build_full, full_initial_state, propagate, reduced_density
from centralspin.single_qubit import SingleQubitParams, apply_channel, channel
from centralspin.two_qubit import TwoQubitState

from conftest import random_bath, random_density, random_unit


def random_params(rng, N):
    return SingleQubitParams(N, omega1=rng.uniform(-1, 1), g1=rng.uniform(0.5, 1.5), g1p=rng.uniform(-1, 1))


def random_joint(rng, N1, N2, rho0=None):
    rho0 = random_density(rng, 4) if rho0 is None else rho0
    return JointInitialState(rho0, random_bath(rng, N1), random_bath(rng, N2), random_params(rng, N1), random_params(rng, N2))


def test_identity_at_time_zero(rng):
    state = random_joint(rng, 5, 8)
    np.testing.assert_allclose(compose(state, 0.0), state.rho0, atol=1e-15)


def test_product_input_factorizes(rng):
    rho1, rho2 = random_density(rng, 2), random_density(rng, 2)
    state = random_joint(rng, 6, 9, np.kron(rho1, rho2))
    for t in (0.4, 7.0, 40.0):
        Y1 = channel(state.params1, state.bath1, t)
        Y2 = channel(state.params2, state.bath2, t)
        expected = np.kron(apply_channel(Y1, rho1), apply_channel(Y2, rho2))
        np.testing.assert_allclose(compose(state, t), expected, atol=1e-12)


def test_product_states_never_become_entangled(rng):
    for _ in range(5):
        psi = np.kron(random_unit(rng, 2), random_unit(rng, 2))
        state = random_joint(rng, 20, 30, np.outer(psi, psi.conj()))
        for t in np.linspace(0, 60, 7):
            assert concurrence(compose(state, t)) <= 1e-10


def test_trace_hermiticity_and_positivity(rng):
    for _ in range(10):
        state = random_joint(rng, int(rng.integers(1, 61)), int(rng.integers(1, 61)))
        rho = compose(state, rng.uniform(0, 100))
        assert np.trace(rho).real == pytest.approx(1, abs=1e-12)
        np.testing.assert_allclose(rho, rho.conj().T, atol=1e-12)
        check_density_matrix(rho, tol=1e-9)


def test_matches_joint_full_space_simulation(rng):
    N1, N2 = 3, 3
    p1, p2 = random_params(rng, N1), random_params(rng, N2)
    b1, b2 = random_bath(rng, N1), random_bath(rng, N2)
    psi_q = random_unit(rng, 4)
    H = build_full((p1, p2), individual=True)
    psi0 = full_initial_state(psi_q, b1, b2)
    state = JointInitialState(np.outer(psi_q, psi_q.conj()), b1, b2, p1, p2)
    for t in (0.0, 2.5, 11.0):
        psi = propagate(H, psi0, t)
        np.testing.assert_allclose(compose(state, t), reduced_density(psi, [0, 1], 2 + N1 + N2), atol=1e-8)


def test_bell_state_concurrence_vanishes_in_finite_time():
    N = 60
    p = SingleQubitParams(N, omega1=1.0, g1=1.0, g1p=1.0)
    b = spin_coherent(N, 0.3 * np.pi)
    state = JointInitialState(TwoQubitState.bell().density(), b, b, p, p)
    assert concurrence(compose(state, 0.0)) == pytest.approx(1, abs=1e-12)
    assert 0 < concurrence(compose(state, 10.0)) < 0.5
    assert concurrence(compose(state, 20.0)) == 0
    assert concurrence(compose(state, 40.0)) == 0


def test_compose_channels_index_order():
    # a channel that flips qubit 1 only: Y[a,b,c,d] = X[a,c] X[b,d]
    X = np.array([[0, 1], [1, 0]])
    Yflip = np.einsum("ac,bd->abcd", X, X)
    Yid = np.einsum("ac,bd->abcd", np.eye(2), np.eye(2))
    rho = np.diag([1.0, 0, 0, 0])  # |uu><uu|
    np.testing.assert_allclose(compose_channels(Yflip, Yid, rho), np.diag([0, 0, 1.0, 0]))
    np.testing.assert_allclose(compose_channels(Yid, Yflip, rho), np.diag([0, 1.0, 0, 0]))


def test_joint_state_validation(rng):
    b, p = random_bath(rng, 3), random_params(rng, 3)
    with pytest.raises(ValueError):
        JointInitialState(np.eye(4), b, b, p, p)  # trace 4
    with pytest.raises(ValueError):
        JointInitialState(np.eye(2) / 2, b, b, p, p)
    with pytest.raises(ValueError):
        JointInitialState(np.eye(4) / 4, random_bath(rng, 4), b, p, p)
