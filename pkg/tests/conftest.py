"""Shared helpers for the test suite.

Plain functions rather than fixtures: most tests want several independent
draws from one rng, which fixtures make awkward.
"""

import numpy as np

from qwres import (
    CoinSequence,
    WaveState,
    basis_state,
    hadamard_coin,
    rotation_coin,
    validate_coin,
)


def haar_coin(rng, min_a=0.1):
    """Haar-random 2x2 unitary, resampled until |a| >= min_a.

    The resampling keeps random instances away from the a=0 boundary where
    the walk decouples; min_a=0.1 rejects about 1% of draws.
    """
    while True:
        m = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
        q, r = np.linalg.qr(m)
        q = q * (np.diag(r) / np.abs(np.diag(r)))
        if abs(q[0, 0]) >= min_a:
            return validate_coin(q)


def random_sequence(rng, n0, min_a=0.1):
    return CoinSequence(n0, tuple(haar_coin(rng, min_a) for _ in range(n0 + 1)))


def hadamard_pair():
    return CoinSequence(1, (hadamard_coin(), hadamard_coin()))


def triple_barrier():
    return CoinSequence(2, (rotation_coin(3 / 4), rotation_coin(12 / 13), rotation_coin(1 / 3)))


def random_state(rng, n0, nu_max, span=3):
    """Random normalized state whose incoming length is at most nu_max.

    R amplitudes are allowed only at sites >= 1 - nu_max and L amplitudes
    only at sites <= n0 + nu_max - 1; within that, support is drawn over
    [-span, n0 + span] intersected with the allowed region.
    """
    lo, hi = -span, n0 + span
    amp = np.zeros((hi - lo + 1, 2), dtype=complex)
    while not amp.any():
        for i, n in enumerate(range(lo, hi + 1)):
            if rng.random() < 0.5 and n <= n0 + nu_max - 1:
                amp[i, 0] = rng.normal() + 1j * rng.normal()
            if rng.random() < 0.5 and n >= 1 - nu_max:
                amp[i, 1] = rng.normal() + 1j * rng.normal()
    psi = WaveState(lo, amp)
    return (1.0 / psi.norm()) * psi


def window_state(rng, n0):
    """Random normalized state supported inside [0, n0]."""
    amp = rng.normal(size=(n0 + 1, 2)) + 1j * rng.normal(size=(n0 + 1, 2))
    psi = WaveState(0, amp)
    return (1.0 / psi.norm()) * psi


def delta0L():
    return basis_state(0, "L")
