import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from centralspin.dicke_basis import (
    MAX_BATH_SPINS,
    BathState,
    CapacityError,
    binomial,
    equally_weighted,
    fully_polarized,
    pair_elements,
    spin_coherent,
    w_class,
)
from centralspin.oracle import dicke_embedding

from conftest import random_bath


def pascal(n_max):
    rows = [[1]]
    for n in range(1, n_max + 1):
        prev = rows[-1]
        rows.append([1] + [prev[k - 1] + prev[k] for k in range(1, n)] + [1])
    return rows


def test_binomial_small_cases():
    assert binomial(4, 2) == 6
    assert binomial(5, -1) == 0
    assert binomial(5, 6) == 0
    assert binomial(0, 0) == 1


def test_binomial_matches_pascal_triangle_exactly():
    rows = pascal(64)
    for n in range(65):
        for k in range(n + 1):
            assert binomial(n, k) == rows[n][k]
    assert binomial(60, 30) == rows[60][30]


def test_binomial_capacity():
    with pytest.raises(CapacityError):
        binomial(65, 3)
    with pytest.raises(ValueError):
        binomial(-1, 0)


def test_bath_state_validation():
    with pytest.raises(ValueError):
        BathState(3, [1, 0, 0])  # wrong length
    with pytest.raises(ValueError):
        BathState(2, [1, 1, 0])  # not normalized
    with pytest.raises(CapacityError):
        fully_polarized(MAX_BATH_SPINS + 1)
    b = fully_polarized(3, 1)
    with pytest.raises(ValueError):
        b.gamma[0] = 1  # immutable


def test_excitation_index_translation():
    b = BathState(3, np.array([0.1, 0.2, 0.3, math.sqrt(1 - 0.14)]))
    assert b.gamma_for_excitation(3) == pytest.approx(0.1)
    assert b.gamma_for_excitation(0) == pytest.approx(math.sqrt(0.86))
    assert b.gamma_for_excitation(-1) == 0
    assert b.gamma_for_excitation(4) == 0
    np.testing.assert_array_equal(b.by_excitation(), b.gamma[::-1])


def test_spin_coherent_limits_and_small_case():
    np.testing.assert_array_equal(spin_coherent(5, 0.0).gamma, fully_polarized(5, 0).gamma)
    np.testing.assert_array_equal(spin_coherent(5, math.pi).gamma, fully_polarized(5, 5).gamma)
    q = spin_coherent(2, math.pi / 2).by_excitation()
    np.testing.assert_allclose(np.abs(q) ** 2, [0.25, 0.5, 0.25], atol=1e-15)
    with pytest.raises(ValueError):
        spin_coherent(4, -0.1)


def test_spin_coherent_peak_sector():
    q = np.abs(spin_coherent(60, 3 * math.pi / 10).by_excitation())
    assert int(np.argmax(q)) == 48


def test_spin_coherent_is_a_rotated_product_state():
    # each bath spin in cos(theta/2)|up> + sin(theta/2) e^{i phi}|down>, up to a global phase
    N, theta, phi = 5, 1.1, 0.7
    single = np.array([math.cos(theta / 2), math.sin(theta / 2) * np.exp(1j * phi)])
    product = single
    for _ in range(N - 1):
        product = np.kron(product, single)
    embedded = dicke_embedding(N) @ spin_coherent(N, theta, phi).gamma
    overlap = np.vdot(product, embedded)
    assert abs(abs(overlap) - 1) < 1e-12


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 62), st.floats(0.01, math.pi - 0.01), st.floats(-math.pi, math.pi))
def test_spin_coherent_reflection_and_norm(N, theta, phi):
    a = spin_coherent(N, theta, phi).by_excitation()
    b = spin_coherent(N, math.pi - theta, phi).by_excitation()
    assert abs(np.sum(np.abs(a) ** 2) - 1) < 1e-12
    np.testing.assert_allclose(np.abs(a) ** 2, np.abs(b[::-1]) ** 2, atol=1e-12)


def test_equally_weighted():
    np.testing.assert_allclose(equally_weighted(3).gamma, 0.5)
    np.testing.assert_allclose(equally_weighted(2).gamma, 1 / math.sqrt(3))
    np.testing.assert_allclose(equally_weighted(60).density(), 1 / 61, atol=1e-15)
    with pytest.raises(ValueError):
        equally_weighted(1)


def test_w_class():
    b = w_class(6, 1, 0)
    np.testing.assert_array_equal(b.gamma, [0, 0, 0, 0, 0, 1, 0])
    b = w_class(4, 0.6, 0.8)
    assert b.gamma[3] == 0.6 and b.gamma[4] == 0.8
    with pytest.raises(ValueError):
        w_class(4, 0.6, 0.6)


def test_pair_elements_examples():
    assert pair_elements(2).up_up[0] == 1
    assert pair_elements(60).flip[1] == pytest.approx(1 / 60, abs=1e-15)
    for N in (2, 5, 60):
        assert pair_elements(N).up_up[N] == 0


@pytest.mark.parametrize("N", range(2, 63))
def test_pair_element_completeness(N):
    # Vandermonde: C(N-2,m) + 2 C(N-2,m-1) + C(N-2,m-2) = C(N,m)
    for m in range(N + 1):
        total = binomial(N - 2, m) + 2 * binomial(N - 2, m - 1) + binomial(N - 2, m - 2)
        assert total == binomial(N, m)
    el = pair_elements(N)
    np.testing.assert_allclose(el.up_up + 2 * el.flip + el.down_down, 1.0, atol=1e-15)
    for arr in (el.up_up, el.flip, el.down_down, el.step_up, el.step_down, el.double):
        assert np.all((arr >= 0) & (arr <= 1))


_SP = np.array([[0, 1], [0, 0]])  # T+ : |down> -> |up>, basis (up, down)
_SM = _SP.T


def two_site(op1, op2, N):
    return np.kron(np.kron(op1, op2), np.eye(2 ** (N - 2)))


@pytest.mark.parametrize("N", range(2, 9))
def test_pair_elements_match_brute_force(N):
    D = dicke_embedding(N)
    el = pair_elements(N)
    nup, ndn = _SP @ _SM, _SM @ _SP  # projectors on up, down
    ops = {
        "up_up": (two_site(nup, nup, N), 0),
        "flip": (two_site(_SM, _SP, N), 0),
        "down_down": (two_site(ndn, ndn, N), 0),
        "step_up": (two_site(nup, _SM, N), 1),
        "step_down": (two_site(_SM, ndn, N), 1),
        "double": (two_site(_SM, _SM, N), 2),
    }
    for name, (op, shift) in ops.items():
        expected = np.zeros(N + 1)
        for m in range(N + 1 - shift):
            expected[m] = D[:, m + shift] @ op @ D[:, m]
        np.testing.assert_allclose(getattr(el, name), expected, atol=1e-12, err_msg=name)
    # the listed equalities between families
    np.testing.assert_allclose(
        [D[:, m] @ two_site(nup, ndn, N) @ D[:, m] for m in range(N + 1)], el.flip, atol=1e-12
    )
    np.testing.assert_allclose(
        [D[:, m + 1] @ two_site(_SM, nup, N) @ D[:, m] for m in range(N)], el.step_up[:N], atol=1e-12
    )


def test_dicke_embedding_is_orthonormal_and_symmetric():
    N = 6
    D = dicke_embedding(N)
    np.testing.assert_allclose(D.T @ D, np.eye(N + 1), atol=1e-14)
    for m in range(N + 1):
        support = np.flatnonzero(D[:, m])
        assert len(support) == binomial(N, m)
        assert all(bin(i).count("1") == m for i in support)


def test_random_bath_states_are_normalized(rng):
    for N in (1, 7, 62):
        b = random_bath(rng, N)
        assert abs(np.sum(np.abs(b.gamma) ** 2) - 1) < 1e-12
        assert b.half == N / 2

