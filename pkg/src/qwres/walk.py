"""Time evolution of the walk and its compression to the perturbed window.

One step sends psi(n) to P_{n+1} psi(n+1) + Q_{n-1} psi(n-1), where P and Q
are the upper and lower rows of the site coins.  Outside the perturbed
window the coins are the identity, so the step is a pure shift there: L
amplitudes travel left, R amplitudes travel right, with no rounding at all.

K is the restriction of the step to the sites 0..n0.  It is a contraction;
the norm it loses in one application is exactly what the walk radiates out
of the window, which is the content of :func:`norm_defect`.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .coins import CoinSequence
from .errors import UnsupportedN0
from .states import WaveState

__all__ = [
    "KMatrix",
    "step",
    "evolve",
    "build_K",
    "survival_norm",
    "norm_defect",
    "kernel_witnesses",
]


def step(psi: WaveState, cs: CoinSequence) -> WaveState:
    """Apply the walk once; the window grows by one site on each side."""
    if psi.is_zero():
        return psi
    lo, hi = psi.support_lo - 1, psi.support_hi + 1
    sites = np.arange(lo, hi + 1)
    padded = np.zeros((len(sites) + 2, 2), dtype=complex)
    padded[2:-2] = psi.amplitudes
    # row k of padded holds psi at site lo - 1 + k
    up = padded[2:]  # psi(n+1) for n in [lo, hi]
    down = padded[:-2]  # psi(n-1)
    a_u, b_u, _, _ = cs.entry_arrays(sites + 1)
    _, _, c_d, d_d = cs.entry_arrays(sites - 1)
    out = np.empty((len(sites), 2), dtype=complex)
    out[:, 0] = a_u * up[:, 0] + b_u * up[:, 1]
    out[:, 1] = c_d * down[:, 0] + d_d * down[:, 1]
    return WaveState(lo, out)


def evolve(psi0: WaveState, cs: CoinSequence, T: int) -> list[WaveState]:
    """Trajectory [psi_0, ..., psi_T] under repeated steps."""
    if T < 0:
        raise ValueError(f"T must be nonnegative, got {T}")
    traj = [psi0]
    for _ in range(T):
        traj.append(step(traj[-1], cs))
    return traj


@dataclass(frozen=True)
class KMatrix:
    """Dense restriction of the step to sites 0..n0, canonical layout."""

    n0: int
    entries: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.entries, dtype=complex)
        dim = 2 * (self.n0 + 1)
        if m.shape != (dim, dim):
            raise ValueError(f"K must be {dim}x{dim}, got {m.shape}")
        top = np.linalg.norm(m, 2)
        if top > 1 + 1e-12:
            raise ValueError(f"K has operator norm {top:.15f} > 1")
        m = m.copy()
        m.flags.writeable = False
        object.__setattr__(self, "entries", m)


def build_K(cs: CoinSequence) -> KMatrix:
    """Assemble K row by row.

    The rows at the sites 0 and n0 keep only the inward contribution
    (P_1 psi(1) and Q_{n0-1} psi(n0-1)); interior rows copy the walk.
    """
    n0 = cs.n0
    if n0 < 1:
        raise UnsupportedN0("K needs n0 >= 1, the boundary rows collapse at n0=0")
    dim = 2 * (n0 + 1)
    k = np.zeros((dim, dim), dtype=complex)
    for n in range(n0 + 1):
        if n < n0:  # L row takes P_{n+1} psi(n+1)
            u = cs.coin_at(n + 1)
            k[2 * n, 2 * (n + 1)] = u.a
            k[2 * n, 2 * (n + 1) + 1] = u.b
        if n > 0:  # R row takes Q_{n-1} psi(n-1)
            u = cs.coin_at(n - 1)
            k[2 * n + 1, 2 * (n - 1)] = u.c
            k[2 * n + 1, 2 * (n - 1) + 1] = u.d
    return KMatrix(n0, k)


def kernel_witnesses(cs: CoinSequence) -> tuple[np.ndarray, np.ndarray]:
    """Two explicit kernel vectors of K, one per window edge.

    At site 0 the vector (d0, -c0) is annihilated because the R row at
    site 1 contracts it with (c0, d0); the mirror holds at site n0.
    """
    dim = 2 * (cs.n0 + 1)
    u0, un = cs.coin_at(0), cs.coin_at(cs.n0)
    v0 = np.zeros(dim, dtype=complex)
    v0[0], v0[1] = u0.d, -u0.c
    vn = np.zeros(dim, dtype=complex)
    vn[-2], vn[-1] = un.b, -un.a
    return v0, vn


def survival_norm(trajectory: list[WaveState], n0: int) -> list[float]:
    """Per-step l2 norm of the restriction to the window [0, n0]."""
    return [t.restrict(0, n0).norm() for t in trajectory]


def norm_defect(cs: CoinSequence, v: np.ndarray) -> float:
    """Residual of the norm identity for one window vector.

    ||v||^2 splits exactly into ||Kv||^2 plus the two amplitudes the walk
    emits from the window edges, |<L| P_0 v(0)|^2 and |<R| Q_{n0} v(n0)|^2.
    Returns the absolute defect of that identity.
    """
    v = np.asarray(v, dtype=complex)
    k = build_K(cs)
    u0, un = cs.coin_at(0), cs.coin_at(cs.n0)
    left = u0.a * v[0] + u0.b * v[1]
    right = un.c * v[-2] + un.d * v[-1]
    total = np.linalg.norm(v) ** 2
    kept = np.linalg.norm(k.entries @ v) ** 2
    return float(abs(total - kept - abs(left) ** 2 - abs(right) ** 2))
