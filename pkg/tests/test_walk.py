import numpy as np
import pytest

from conftest import hadamard_pair, random_sequence, random_state, window_state
from qwres import (
    CoinSequence,
    UnsupportedN0,
    WaveState,
    basis_state,
    build_K,
    evolve,
    identity_coin,
    kernel_witnesses,
    norm_defect,
    step,
    survival_norm,
)

S = 2.0 ** -0.5


def dense_step_matrix(cs, m):
    """One-step operator on sites [-m, m] as a dense matrix (oracle).

    Rows near the boundary miss their neighbors, so only compare states
    whose image stays inside [-m + 1, m - 1].
    """
    dim = 2 * (2 * m + 1)
    u = np.zeros((dim, dim), dtype=complex)
    for n in range(-m, m + 1):
        i = 2 * (n + m)
        if n + 1 <= m:
            up = cs.coin_at(n + 1)
            u[i, i + 2] = up.a
            u[i, i + 3] = up.b
        if n - 1 >= -m:
            uq = cs.coin_at(n - 1)
            u[i + 1, i - 2] = uq.c
            u[i + 1, i - 1] = uq.d
    return u


def test_step_matches_dense_matrix():
    rng = np.random.default_rng(41)
    for _ in range(20):
        n0 = int(rng.integers(0, 4))
        cs = random_sequence(rng, n0)
        psi = random_state(rng, n0, 4)
        m = max(abs(psi.support_lo), abs(psi.support_hi)) + 2
        vec = np.zeros(2 * (2 * m + 1), dtype=complex)
        for n in range(-m, m + 1):
            vec[2 * (n + m) : 2 * (n + m) + 2] = psi.amplitude(n)
        out_vec = dense_step_matrix(cs, m) @ vec
        got = step(psi, cs)
        for n in range(-m + 1, m):
            np.testing.assert_allclose(
                got.amplitude(n), out_vec[2 * (n + m) : 2 * (n + m) + 2], atol=1e-14
            )


def test_step_is_a_shift_outside_the_window():
    cs = CoinSequence(0, (identity_coin(),))
    assert (step(basis_state(-3, "L"), cs) - basis_state(-4, "L")).norm() == 0.0
    assert (step(basis_state(3, "R"), cs) - basis_state(4, "R")).norm() == 0.0


def test_step_preserves_norm():
    rng = np.random.default_rng(43)
    for _ in range(20):
        cs = random_sequence(rng, int(rng.integers(0, 5)))
        psi = random_state(rng, cs.n0, 4)
        assert step(psi, cs).norm() == pytest.approx(psi.norm(), abs=1e-13)


def test_step_linear():
    rng = np.random.default_rng(47)
    cs = random_sequence(rng, 2)
    a = random_state(rng, 2, 3)
    b = random_state(rng, 2, 3)
    lhs = step(a + (1 - 2j) * b, cs)
    rhs = step(a, cs) + (1 - 2j) * step(b, cs)
    assert (lhs - rhs).norm() < 1e-14


def test_hadamard_pair_first_two_steps_by_hand():
    cs = hadamard_pair()
    t1 = step(basis_state(0, "L"), cs)
    np.testing.assert_allclose(t1.amplitude(-1), [S, 0.0], atol=1e-15)
    np.testing.assert_allclose(t1.amplitude(1), [0.0, S], atol=1e-15)
    t2 = step(t1, cs)
    np.testing.assert_allclose(t2.amplitude(-2), [S, 0.0], atol=1e-15)
    np.testing.assert_allclose(t2.amplitude(0), [0.5, 0.0], atol=1e-15)
    np.testing.assert_allclose(t2.amplitude(2), [0.0, -0.5], atol=1e-15)


def test_evolve_returns_inclusive_trajectory():
    cs = hadamard_pair()
    psi0 = basis_state(0, "L")
    traj = evolve(psi0, cs, 5)
    assert len(traj) == 6
    assert traj[0] is psi0
    assert (traj[2] - step(step(psi0, cs), cs)).norm() == 0.0
    with pytest.raises(ValueError):
        evolve(psi0, cs, -1)


def test_build_K_hadamard_entries():
    k = build_K(hadamard_pair())
    expected = np.array(
        [
            [0, 0, S, S],
            [0, 0, 0, 0],
            [0, 0, 0, 0],
            [S, -S, 0, 0],
        ]
    )
    np.testing.assert_allclose(k.entries, expected, atol=1e-15)
    assert k.n0 == 1


def test_build_K_requires_positive_n0():
    with pytest.raises(UnsupportedN0):
        build_K(CoinSequence(0, (identity_coin(),)))


def test_K_agrees_with_step_on_window_interior():
    # K is the compression of the step: applying it to the window vector of
    # a window-supported state matches the stepped state inside [0, n0].
    rng = np.random.default_rng(53)
    for _ in range(10):
        n0 = int(rng.integers(1, 6))
        cs = random_sequence(rng, n0)
        psi = window_state(rng, n0)
        from qwres import state_from_flat, window_vector

        kv = build_K(cs).entries @ window_vector(psi, n0)
        inside = step(psi, cs).restrict(0, n0)
        assert (state_from_flat(kv, n0) - inside).norm() < 1e-14


def test_K_is_a_contraction():
    rng = np.random.default_rng(59)
    for _ in range(20):
        cs = random_sequence(rng, int(rng.integers(1, 7)))
        k = build_K(cs).entries
        assert np.linalg.norm(k, 2) <= 1.0 + 1e-12


def test_kernel_witnesses_annihilated():
    rng = np.random.default_rng(61)
    cs = random_sequence(rng, 3)
    k = build_K(cs).entries
    v0, vn = kernel_witnesses(cs)
    assert np.linalg.norm(k @ v0) < 1e-14
    assert np.linalg.norm(k @ vn) < 1e-14
    assert np.linalg.norm(v0) > 0.9 and np.linalg.norm(vn) > 0.9


def test_survival_norm_equals_K_power_norms():
    rng = np.random.default_rng(67)
    cs = random_sequence(rng, 2)
    psi = window_state(rng, 2)
    traj = evolve(psi, cs, 30)
    norms = survival_norm(traj, 2)
    from qwres import window_vector

    v = window_vector(psi, 2)
    k = build_K(cs).entries
    for t in range(31):
        assert norms[t] == pytest.approx(np.linalg.norm(np.linalg.matrix_power(k, t) @ v), abs=1e-12)


def test_norm_defect_small_on_random_vectors():
    rng = np.random.default_rng(71)
    for _ in range(50):
        n0 = int(rng.integers(1, 7))
        cs = random_sequence(rng, n0)
        v = rng.normal(size=2 * (n0 + 1)) + 1j * rng.normal(size=2 * (n0 + 1))
        v /= np.linalg.norm(v)
        assert norm_defect(cs, v) < 1e-13
