"""Resonances located three independent ways, with their resonant states.

A resonance is simultaneously a pole of the scattering matrix, a zero of
the lower-right transfer-product entry, and a nonzero eigenvalue of the
window restriction K through lambda = e^{-i xi}.  This module computes the
set from the transfer polynomial, cross-checks it against a dense
eigensolve of K on every call, and exposes a contour winding count as the
third, analytically independent characterization.

Conventions.  Each nonzero polynomial root mu = lambda^2 inside the unit
disk produces a pair of resonances: the strip representative with
Re xi in [-pi, 0) and its partner at xi + pi, carrying lambda and -lambda.
Multiplicities come from root clustering and are validated by the winding
integral.  Geometric multiplicity is always one, so the resonant states at
one resonance form a single Jordan chain.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .coins import CoinSequence
from .errors import (
    ChainSolveFailed,
    CircleTouchesOtherResonance,
    InvariantViolation,
    RootFindingDiverged,
)
from .states import WaveState
from .transfer import transfer_polynomial, transfer_product
from .walk import build_K, step

__all__ = [
    "Resonance",
    "JordanChainStates",
    "aberth_roots",
    "find_resonances",
    "winding_count",
    "validate_multiplicity",
    "resonant_chain",
    "strip_pair",
]

CLUSTER_SCALE = 1e-6


@dataclass(frozen=True)
class Resonance:
    """One resonance: strip coordinate xi, eigenvalue lam, root mu.

    lam = e^{-i xi} and mu = lam^2 are stored redundantly and checked
    against each other; Im xi < 0 so |lam| < 1.
    """

    xi: complex
    lam: complex
    mu: complex
    alg_multiplicity: int

    def __post_init__(self):
        if not -math.pi <= self.xi.real < math.pi:
            raise InvariantViolation(f"Re xi = {self.xi.real} outside [-pi, pi)")
        if not self.xi.imag < 0:
            raise InvariantViolation(f"Im xi = {self.xi.imag} not negative")
        if abs(self.lam) >= 1:
            raise InvariantViolation(f"|lambda| = {abs(self.lam)} not below 1")
        if abs(cmath.exp(-1j * self.xi) - self.lam) > 1e-12 * (1 + abs(self.lam)):
            raise InvariantViolation("xi and lambda disagree beyond 1e-12")
        if abs(self.lam**2 - self.mu) > 1e-12 * (1 + abs(self.mu)):
            raise InvariantViolation("lambda^2 and mu disagree beyond 1e-12")
        if self.alg_multiplicity < 1:
            raise InvariantViolation("multiplicity must be positive")


def aberth_roots(coeffs) -> np.ndarray:
    """All roots of a monic polynomial by simultaneous Aberth iteration.

    coeffs is lowest degree first with a trailing 1.  Iterates until every
    residual |p(x)| sits below the backward-error floor 16 eps sum |c_k||x|^k
    or every correction stalls at 1e-13 (1 + |x|); 500 sweeps without that
    raises RootFindingDiverged.
    """
    c = np.asarray(coeffs, dtype=complex)
    d = len(c) - 1
    if d <= 0:
        return np.zeros(0, dtype=complex)
    if d == 1:
        return np.array([-c[0]])
    high = c[::-1]
    dhigh = np.polyder(high)
    abs_high = np.abs(high)
    eps = np.finfo(float).eps
    radius = 1.0 + np.max(np.abs(c[:-1]))
    # the angular offset keeps the start away from real-axis root symmetry
    x = radius * np.exp(2j * np.pi * (np.arange(d) + 0.37) / d)
    for _ in range(500):
        p = np.polyval(high, x)
        floor = 16 * eps * np.polyval(abs_high, np.abs(x))
        done = np.abs(p) <= floor
        if np.all(done):
            return x
        dp = np.polyval(dhigh, x)
        dp = np.where(dp == 0, eps, dp)
        w = p / dp
        diff = x[:, None] - x[None, :]
        np.fill_diagonal(diff, np.inf)
        diff = np.where(diff == 0, 1e-300, diff)
        s = np.sum(1.0 / diff, axis=1)
        delta = w / (1.0 - w * s)
        delta = np.where(np.isfinite(delta), delta, w)
        x = np.where(done, x, x - delta)
        if np.all(done | (np.abs(delta) <= 1e-13 * (1 + np.abs(x)))):
            return x
    raise RootFindingDiverged("Aberth iteration did not settle in 500 sweeps")


def _cluster(roots: np.ndarray) -> list[np.ndarray]:
    """Group root approximations within radius 1e-6 max(1, |mu|)."""
    order = np.lexsort((roots.imag, roots.real))
    roots = roots[order]
    used = np.zeros(len(roots), dtype=bool)
    clusters = []
    for i in range(len(roots)):
        if used[i]:
            continue
        group = [i]
        used[i] = True
        frontier = [i]
        while frontier:
            j = frontier.pop()
            for k in range(len(roots)):
                if used[k]:
                    continue
                tol = CLUSTER_SCALE * max(1.0, abs(roots[j]), abs(roots[k]))
                if abs(roots[j] - roots[k]) <= tol:
                    used[k] = True
                    group.append(k)
                    frontier.append(k)
        clusters.append(roots[group])
    return clusters


def _polish(coeffs: np.ndarray, x0: complex, m: int) -> complex:
    """Refine an m-fold root as a simple root of the (m-1)-th derivative.

    An m-fold cluster centroid is accurate to about sqrt-of-eps digits; the
    derivative p^(m-1) has a simple root at the same point, where Newton is
    well posed and recovers nearly full precision.
    """
    high = coeffs[::-1]
    for _ in range(m - 1):
        high = np.polyder(high)
    dhigh = np.polyder(high)
    x = complex(x0)
    for _ in range(60):
        q = np.polyval(high, x)
        dq = np.polyval(dhigh, x)
        if dq == 0:
            break
        dx = q / dq
        x -= dx
        if abs(dx) <= 1e-15 * (1 + abs(x)):
            break
    if abs(x - x0) > 1e-3 * (1 + abs(x0)):  # Newton ran away, keep the centroid
        return complex(x0)
    return x


def strip_pair(mu: complex, multiplicity: int) -> tuple[Resonance, Resonance]:
    """The two resonances attached to one nonzero root mu of p.

    The square roots of mu are the eigenvalues; the strip coordinates are
    placed with the primary in Re xi in [-pi, 0) and the partner at +pi.
    """
    lam = cmath.sqrt(mu)
    xi = 1j * cmath.log(lam)
    if not -math.pi <= xi.real < 0:
        xi, lam = xi - math.pi, -lam
    first = Resonance(xi, lam, mu, multiplicity)
    second = Resonance(xi + math.pi, -lam, mu, multiplicity)
    return first, second


def _dense_crosscheck(resonances: list[Resonance], evals: np.ndarray) -> None:
    """Match the polynomial eigenvalues against a dense eigensolve of K.

    An m-fold eigenvalue is only determined to about eps^(1/m) by QR
    iteration, so the matching tolerance widens with multiplicity.  After
    all resonant eigenvalues are consumed, whatever remains must be the
    zero group (which spreads to eps^(1/index) for nilpotent blocks).
    """
    eps = np.finfo(float).eps
    remaining = list(evals)
    for r in resonances:
        tol = max(1e-8, 50 * eps ** (1.0 / r.alg_multiplicity)) * max(1, abs(r.lam))
        for _ in range(r.alg_multiplicity):
            dists = [abs(e - r.lam) for e in remaining]
            i = int(np.argmin(dists))
            if dists[i] > tol:
                raise InvariantViolation(
                    f"no dense eigenvalue within {tol:.2e} of lambda={r.lam}"
                )
            remaining.pop(i)
    stray = [e for e in remaining if abs(e) > 1e-6]
    if stray:
        raise InvariantViolation(
            f"dense eigensolve has nonzero eigenvalues {stray} the polynomial missed"
        )


def find_resonances(cs: CoinSequence) -> list[Resonance]:
    """All resonances of the walk, sorted by (Re xi, Im xi).

    Roots of the transfer polynomial are found by Aberth iteration,
    clustered into multiplicities, polished, and mapped into the strip.
    Zero roots of p are structural (they never correspond to resonances)
    and are deflated before iteration.  Every call cross-checks the
    eigenvalue multiset against numpy's dense eigensolver on K.
    """
    tp = transfer_polynomial(cs)
    coeffs = np.array(tp.coeffs)
    scale = np.max(np.abs(coeffs))
    while len(coeffs) > 1 and abs(coeffs[0]) <= 1e-13 * scale:
        coeffs = coeffs[1:]
    out: list[Resonance] = []
    if len(coeffs) > 1:
        for cluster in _cluster(aberth_roots(coeffs)):
            m = len(cluster)
            mu = _polish(coeffs, complex(np.mean(cluster)), m)
            if abs(mu) >= 1 + 1e-12:
                raise InvariantViolation(
                    f"transfer polynomial root mu={mu} lies outside the unit disk"
                )
            if m > cs.n0:
                raise InvariantViolation(
                    f"root multiplicity {m} exceeds the window size {cs.n0}"
                )
            out.extend(strip_pair(mu, m))
    out.sort(key=lambda r: (r.xi.real, r.xi.imag))
    if cs.n0 >= 1:
        _dense_crosscheck(out, np.linalg.eigvals(build_K(cs).entries))
    return out


def winding_count(cs: CoinSequence, center: complex, rho: float, nodes: int = 512) -> complex:
    """Contour integral counting zeros of the transfer-product 22 entry.

    Trapezoid rule on a circle of radius rho around center, with the
    logarithmic derivative formed from central differences at step
    1e-4 rho.  Exact integer values signal correct multiplicities; the
    caller decides how much drift to accept.
    """
    theta = 2 * np.pi * np.arange(nodes) / nodes
    e = np.exp(1j * theta)
    zeta = center + rho * e
    h = 1e-4 * rho
    pts = np.concatenate([zeta, zeta + h, zeta - h])
    t22 = transfer_product(cs, pts)[:, 1, 1]
    f0 = t22[:nodes]
    deriv = (t22[nodes : 2 * nodes] - t22[2 * nodes :]) / (2 * h)
    return complex(rho * np.sum(deriv / f0 * e) / nodes)


def validate_multiplicity(
    cs: CoinSequence,
    res: Resonance,
    rho: float | None = None,
    others: list[Resonance] | None = None,
) -> int:
    """Independent multiplicity of a resonance by the argument principle.

    With rho unset, the circle radius is 0.1 or 0.45 times the distance to
    the nearest other resonance, whichever is smaller.  A caller-supplied
    rho is rejected when another resonance sits within 2 rho.
    """
    if others is None:
        others = find_resonances(cs)
    dists = [abs(o.xi - res.xi) for o in others if abs(o.xi - res.xi) > 1e-9]
    if rho is None:
        rho = 0.1 if not dists else min(0.1, 0.45 * min(dists))
    elif any(d < 2 * rho for d in dists):
        raise CircleTouchesOtherResonance(
            f"another resonance lies within 2 rho = {2 * rho} of xi = {res.xi}"
        )
    val = winding_count(cs, res.xi, rho)
    count = round(val.real)
    if abs(val - count) > 0.25:
        raise InvariantViolation(
            f"winding integral {val} is not close to an integer"
        )
    return count


@dataclass(frozen=True)
class JordanChainStates:
    """The Jordan chain phi^1 .. phi^m at one resonance, extended outward.

    Each state lives on the window [-window_radius, n0 + window_radius].
    phi^1 has a unit-norm restriction; the others solve the shifted chain
    equations with the minimum-norm choice, so nothing is orthonormalized.
    gram records the restricted inner products for whoever needs them.
    """

    resonance: Resonance
    states: tuple[WaveState, ...]
    gram: np.ndarray
    window_radius: int


def resonant_chain(cs: CoinSequence, res: Resonance, N: int) -> JordanChainStates:
    """Build the resonant state and its Jordan chain on [-N, n0 + N].

    phi^1 spans the kernel of K - lambda (geometric multiplicity is always
    one, which is verified).  Each phi^k for k >= 2 is the minimum-norm
    solution of (K - lambda) v = phi^{k-1} on the window.  Outside, the
    only surviving chirality obeys a first-order recursion in lambda with a
    junction factor a_0 (left) or d_{n0} (right) on the first step out:

        phi^k_L(s) = (a phi^k_L(s+1) - phi^{k-1}_L(s)) / lambda,  s <= -1
        phi^k_R(s) = (d phi^k_R(s-1) - phi^{k-1}_R(s)) / lambda,  s >= n0+1

    The chain relation is then verified against one application of the
    walk on the window interior.
    """
    if N < 1:
        raise ValueError(f"window radius must be at least 1, got {N}")
    n0 = cs.n0
    dim = 2 * (n0 + 1)
    lam = res.lam
    kmat = build_K(cs)
    shifted = kmat.entries - lam * np.eye(dim)
    u_svd, s, vh = np.linalg.svd(shifted)
    rank = int(np.sum(s > 1e-8 * s[0]))
    if rank != dim - 1:
        raise InvariantViolation(
            f"kernel of K - lambda at lambda={lam} has dimension {dim - rank}, not 1"
        )
    v1 = vh[-1].conj()
    j = int(np.argmax(np.abs(v1)))
    v1 = v1 * (abs(v1[j]) / v1[j])  # canonical phase, largest entry real positive
    inv_s = np.where(s > 1e-8 * s[0], 1.0 / np.where(s > 0, s, 1.0), 0.0)
    pinv = (vh.conj().T * inv_s) @ u_svd.conj().T
    flats = [v1]
    for k in range(2, res.alg_multiplicity + 1):
        sol = pinv @ flats[-1]
        resid = np.linalg.norm(shifted @ sol - flats[-1])
        if resid > 1e-8 * np.linalg.norm(flats[-1]):
            raise ChainSolveFailed(
                f"chain equation at step {k} is inconsistent, residual {resid:.2e}"
            )
        flats.append(sol)

    a0 = cs.coin_at(0).a
    dn = cs.coin_at(n0).d
    width = n0 + 2 * N + 1
    off = N  # row of site 0
    states = []
    prev = None
    for flat in flats:
        amps = np.zeros((width, 2), dtype=complex)
        amps[off : off + n0 + 1] = flat.reshape(-1, 2)
        for srow in range(off - 1, -1, -1):
            a_fac = a0 if srow == off - 1 else 1.0
            prev_l = prev[srow, 0] if prev is not None else 0.0
            amps[srow, 0] = (a_fac * amps[srow + 1, 0] - prev_l) / lam
        for srow in range(off + n0 + 1, width):
            d_fac = dn if srow == off + n0 + 1 else 1.0
            prev_r = prev[srow, 1] if prev is not None else 0.0
            amps[srow, 1] = (d_fac * amps[srow - 1, 1] - prev_r) / lam
        prev = amps
        states.append(WaveState(-N, amps))

    lo, hi = -N + 1, n0 + N - 1
    for k, phi in enumerate(states):
        want = states[k - 1].restrict(lo, hi) if k > 0 else None
        got = (step(phi, cs) - lam * phi).restrict(lo, hi)
        err = got.norm() if want is None else (got - want).norm()
        scale = max(phi.restrict(lo, hi).norm(), 1.0)
        if err > 1e-8 * scale:
            raise ChainSolveFailed(
                f"chain relation residual {err:.2e} at chain index {k + 1}"
            )

    m = len(flats)
    gram = np.empty((m, m), dtype=complex)
    for i in range(m):
        for j2 in range(m):
            gram[i, j2] = np.vdot(flats[i], flats[j2])
    return JordanChainStates(res, tuple(states), gram, N)
