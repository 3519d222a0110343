"""Resolvent of the walk on finitely supported states, on any finite window.

For a finitely supported f the resolvent (e^{-i xi} - U)^{-1} f reduces to
one dense solve against the window matrix K plus explicit one-sided
geometric sums.  The incoming chiralities (R on the left, L on the right)
feel only the forcing and are finite sums of shifted f values; they feed
the window system through the two rows of K that drop outside input.  The
outgoing chiralities propagate the window solution outward with phase
e^{i xi} per step, again with forcing corrections.  Everything is entire
in xi except the window solve, which is singular exactly at the
resonances and at xi with e^{-i xi} = 0 eigenvalue directions.

The identity (e^{-i xi} - U) R f = f is checked on every call; a quiet
wrong answer is worse than an exception.
"""

from __future__ import annotations

import cmath

import numpy as np

from .coins import CoinSequence
from .errors import AtResonance, InvariantViolation
from .states import WaveState, window_vector, zero_state
from .walk import build_K, step

__all__ = ["apply_resolvent", "identity_residual", "neumann_resolvent"]


def _sup(psi: WaveState) -> float:
    if psi.is_zero():
        return 0.0
    return float(np.max(np.abs(psi.amplitudes)))


def _assemble(cs: CoinSequence, xi: complex, f: WaveState, lo: int, hi: int):
    """Resolvent values on [lo, hi] and the condition number of the solve."""
    n0 = cs.n0
    lam = cmath.exp(-1j * xi)
    e = cmath.exp(1j * xi)
    kmat = build_K(cs).entries
    dim = 2 * (n0 + 1)
    evals = np.linalg.eigvals(kmat)
    if np.min(np.abs(evals - lam)) <= 1e-10:
        raise AtResonance(f"e^(-i xi) = {lam} is within 1e-10 of an eigenvalue of K")
    system = lam * np.eye(dim) - kmat
    cond = float(np.linalg.cond(system))
    if cond > 1e12:
        raise AtResonance(f"window system at xi = {xi} has condition number {cond:.2e}")

    ftilde = window_vector(f, n0)
    # the two rows of K that drop outside input pick it up from the forcing:
    # the incoming chirality just left of 0 and just right of n0, summed
    # with one phase per step of travel
    acc = 0j
    for k in range(1, max(1, 1 - f.support_lo) + 1):
        acc += e**k * f.amplitude(-k)[1]
    ftilde[1] += acc
    acc = 0j
    for k in range(1, max(1, f.support_hi - n0) + 1):
        acc += e**k * f.amplitude(n0 + k)[0]
    ftilde[2 * n0] += acc

    v = np.linalg.solve(system, ftilde)
    u0 = cs.coin_at(0)
    un = cs.coin_at(n0)
    out_left = u0.a * v[0] + u0.b * v[1]
    out_right = un.c * v[2 * n0] + un.d * v[2 * n0 + 1]

    amps = np.zeros((hi - lo + 1, 2), dtype=complex)
    for n in range(lo, hi + 1):
        row = n - lo
        if 0 <= n <= n0:
            amps[row, 0] = v[2 * n]
            amps[row, 1] = v[2 * n + 1]
        elif n < 0:
            val = e ** (-n) * out_left
            for k in range(0, -n):
                val += e ** (k + 1) * f.amplitude(n + k)[0]
            amps[row, 0] = val
            val = 0j
            for k in range(0, n - f.support_lo + 1):
                val += e ** (k + 1) * f.amplitude(n - k)[1]
            amps[row, 1] = val
        else:
            val = e ** (n - n0) * out_right
            for k in range(0, n - n0):
                val += e ** (k + 1) * f.amplitude(n - k)[1]
            amps[row, 1] = val
            val = 0j
            for k in range(0, f.support_hi - n + 1):
                val += e ** (k + 1) * f.amplitude(n + k)[0]
            amps[row, 0] = val
    return WaveState(lo, amps), cond


def apply_resolvent(cs: CoinSequence, xi: complex, f: WaveState, window) -> WaveState:
    """(e^{-i xi} - U)^{-1} f restricted to window = (lo, hi).

    xi may be anywhere the window system is regular; near a resonance (or
    at condition number beyond 1e12) the call refuses with AtResonance.
    The defining identity is verified on the full requested window before
    returning, at relative 1e-10 in the sup norm.
    """
    lo, hi = int(window[0]), int(window[1])
    if hi < lo:
        raise ValueError(f"empty window [{lo}, {hi}]")
    wide, _ = _assemble(cs, xi, f, lo - 1, hi + 1)
    lam = cmath.exp(-1j * xi)
    check = (lam * wide - step(wide, cs) - f).restrict(lo, hi)
    scale = max(_sup(f), _sup(wide), 1e-300)
    if _sup(check) > 1e-10 * scale:
        raise InvariantViolation(
            f"resolvent identity fails by {_sup(check) / scale:.2e} at xi = {xi}"
        )
    return wide.restrict(lo, hi)


def identity_residual(cs: CoinSequence, xi: complex, f: WaveState, window):
    """(relative residual of the defining identity, condition number).

    Same computation as apply_resolvent, but reporting the numbers instead
    of enforcing them, for diagnostics and tabulation.
    """
    lo, hi = int(window[0]), int(window[1])
    if hi < lo:
        raise ValueError(f"empty window [{lo}, {hi}]")
    wide, cond = _assemble(cs, xi, f, lo - 1, hi + 1)
    lam = cmath.exp(-1j * xi)
    check = (lam * wide - step(wide, cs) - f).restrict(lo, hi)
    scale = max(_sup(f), _sup(wide), 1e-300)
    return _sup(check) / scale, cond


def neumann_resolvent(cs: CoinSequence, xi: complex, f: WaveState, window, kmax: int = 200) -> WaveState:
    """Direct series sum_k e^{i (k+1) xi} U^k f, the resolvent for Im xi > 0.

    Convergence needs |e^{i xi}| < 1, so xi in the upper half plane is
    required.  Slow and only as accurate as the truncation; this exists as
    an independent check on apply_resolvent, not for production use.
    """
    if not complex(xi).imag > 0:
        raise ValueError("the series only converges for Im xi > 0")
    lo, hi = int(window[0]), int(window[1])
    e = cmath.exp(1j * xi)
    total = zero_state()
    cur = f
    w = e
    for _ in range(kmax + 1):
        total = total + w * cur
        cur = step(cur, cs)
        w = w * e
    return total.restrict(lo, hi)
