import math

import numpy as np
import pytest

from conftest import hadamard_pair, random_sequence
from qwres import (
    AtResonance,
    CoinSequence,
    JOST_KINDS,
    identity_coin,
    jost,
    scattering_matrix,
    transfer_product,
    wronskian,
)


def test_jost_solutions_solve_the_eigen_equation():
    # Materialized pairs Pi_n = (L(n), R(n+1)) must satisfy the two scalar
    # relations of U psi = e^{-i xi} psi at every window site.
    rng = np.random.default_rng(211)
    for _ in range(10):
        cs = random_sequence(rng, int(rng.integers(0, 5)))
        xi = complex(rng.uniform(-np.pi, np.pi), rng.uniform(-2.0, 2.0))
        e = np.exp(-1j * xi)
        for kind in JOST_KINDS:
            sol = jost(cs, xi, kind)
            pairs = sol.pi_values
            scale = np.max(np.abs(pairs))
            for n in range(cs.n0 + 1):
                c = cs.coin_at(n)
                l_n, r_n1 = pairs[n + 1]
                l_prev, r_n = pairs[n]
                assert abs(e * l_prev - (c.a * l_n + c.b * r_n)) < 1e-11 * scale
                assert abs(e * r_n1 - (c.c * l_n + c.d * r_n)) < 1e-11 * scale


def test_jost_rejects_unknown_kind():
    with pytest.raises(ValueError):
        jost(hadamard_pair(), 0.3, "sideways")


def test_jost_pi_bounds():
    sol = jost(hadamard_pair(), 0.3, "in-")
    with pytest.raises(ValueError):
        sol.pi(-2)
    with pytest.raises(ValueError):
        sol.pi(2)


def test_wronskian_scales_by_transfer_determinant():
    # Both pairs obey Pi_{n-1} = T_n Pi_n, so W_{n-1} = det T_n * W_n
    # with det T_n = a_n / d_n.
    rng = np.random.default_rng(223)
    cs = random_sequence(rng, 3)
    xi = 0.5 - 0.4j
    s1 = jost(cs, xi, "in-")
    s2 = jost(cs, xi, "out+")
    for n in range(cs.n0 + 1):
        c = cs.coin_at(n)
        lhs = wronskian(s1, s2, n - 1)
        rhs = (c.a / c.d) * wronskian(s1, s2, n)
        assert abs(lhs - rhs) < 1e-12 * max(1.0, abs(rhs))


def test_free_walk_scatters_trivially():
    cs = CoinSequence(0, (identity_coin(),))
    for xi in (0.0, 0.8, -2.5):
        sm = scattering_matrix(cs, xi)
        np.testing.assert_allclose(sm.matrix, np.eye(2), atol=1e-13)


def test_scattering_against_transfer_matching():
    # Independent route: match plane waves through the transfer product TT.
    # Left-incoming: t = e^{-i(n0+1)xi} / TT_22, r = t TT_12 e^{i n0 xi};
    # right-incoming: t' = e^{-i(n0+1)xi} det TT / TT_22,
    # r' = -TT_21 e^{-i(2 n0+1)xi} / TT_22.  The library's reflection slots
    # carry the opposite sign relative to this seeding convention.
    rng = np.random.default_rng(227)
    for _ in range(25):
        n0 = int(rng.integers(0, 6))
        cs = random_sequence(rng, n0)
        xi = float(rng.uniform(-np.pi, np.pi))
        tt = transfer_product(cs, xi)
        det = tt[0, 0] * tt[1, 1] - tt[0, 1] * tt[1, 0]
        t_left = np.exp(-1j * (n0 + 1) * xi) / tt[1, 1]
        r_left = t_left * tt[0, 1] * np.exp(1j * n0 * xi)
        t_right = np.exp(-1j * (n0 + 1) * xi) * det / tt[1, 1]
        r_right = -tt[1, 0] * np.exp(-1j * (2 * n0 + 1) * xi) / tt[1, 1]
        sm = scattering_matrix(cs, xi)
        assert abs(sm.t_plus - t_left) < 1e-11
        assert abs(sm.r_minus + r_left) < 1e-11
        assert abs(sm.t_minus - t_right) < 1e-11
        assert abs(sm.r_plus + r_right) < 1e-11


def test_unitary_for_real_xi():
    rng = np.random.default_rng(229)
    for _ in range(20):
        cs = random_sequence(rng, int(rng.integers(0, 7)))
        xi = float(rng.uniform(-np.pi, np.pi))
        sm = scattering_matrix(cs, xi)
        assert sm.unitarity_residual() < 1e-10
        assert abs(abs(sm.t_minus) ** 2 + abs(sm.r_minus) ** 2 - 1.0) < 1e-10
        assert abs(abs(sm.t_plus) ** 2 + abs(sm.r_plus) ** 2 - 1.0) < 1e-10


def test_at_resonance_raises():
    # The Hadamard pair has a resonance with lambda = 2^{-1/2}, which sits
    # at xi = -i ln(2)/2 on the imaginary axis.
    xi_res = -0.5j * math.log(2.0)
    with pytest.raises(AtResonance):
        scattering_matrix(hadamard_pair(), xi_res)


def test_finite_deep_in_lower_half_plane():
    # Resonances live below the axis, and the denominator Wronskian
    # dominates down there, so evaluation stays exact at any depth.
    rng = np.random.default_rng(233)
    cs = random_sequence(rng, 2)
    for xi in (0.3 - 25j, -1.0 - 40j, 0.3 + 5j):
        sm = scattering_matrix(cs, xi)
        assert np.all(np.isfinite(sm.matrix))


def test_refuses_deep_in_upper_half_plane():
    # Far above the axis the continuation outgrows the denominator's
    # scale by more than 13 digits; the pole guard trips on purpose.
    rng = np.random.default_rng(233)
    cs = random_sequence(rng, 2)
    with pytest.raises(AtResonance):
        scattering_matrix(cs, 0.3 + 25j)


def test_meromorphy_across_strip():
    # Away from resonances the coefficients vary smoothly; compare against
    # a small central difference in xi.
    cs = hadamard_pair()
    xi = -0.7 - 0.9j
    h = 1e-6
    sm0 = scattering_matrix(cs, xi)
    sp = scattering_matrix(cs, xi + h)
    sn = scattering_matrix(cs, xi - h)
    deriv = (sp.t_minus - sn.t_minus) / (2 * h)
    second = (sp.t_minus + sn.t_minus - 2 * sm0.t_minus) / h**2
    # second difference of an analytic function at step 1e-6 stays modest
    assert abs(second) * h**2 < 1e-9 * max(1.0, abs(deriv))
