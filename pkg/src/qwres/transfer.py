"""Transfer matrices of the eigen-equation and the polynomial they define.

A solution of the generalized eigen-equation at spectral parameter xi is
determined by the pair (L amplitude at n, R amplitude at n+1).  The local
transfer matrix T_n(xi) moves that pair one site down, T_n Pi_n = Pi_{n-1},
and the full window product TT = T_0 T_1 ... T_{n0} carries the pair across
the perturbation.

Everything spectral in this package reduces to the lower-right entry of
that product.  In the variable z = e^{-i xi}, z^{n0+1} TT_22 is a
polynomial with only even powers from z^2 up, so it can be written as
z^2 p(z^2).  The roots of p in mu = e^{-2 i xi} encode the resonances.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .coins import Coin, CoinSequence
from .errors import RelationCheckFailed

__all__ = [
    "TransferPolynomial",
    "local_transfer",
    "local_transfer_inverse",
    "transfer_product",
    "transfer_polynomial",
]


def local_transfer(c: Coin, xi) -> np.ndarray:
    """T_n(xi); for an array xi the result has shape xi.shape + (2, 2)."""
    xi = np.asarray(xi, dtype=complex)
    e_plus = np.exp(1j * xi)
    e_minus = np.exp(-1j * xi)
    t = np.empty(xi.shape + (2, 2), dtype=complex)
    t[..., 0, 0] = e_plus / np.conj(c.a)
    t[..., 0, 1] = -np.conj(c.c) / np.conj(c.a)
    t[..., 1, 0] = -c.c / c.d
    t[..., 1, 1] = e_minus / c.d
    return t


def local_transfer_inverse(c: Coin, xi) -> np.ndarray:
    """Entrywise closed form of T_n(xi)^{-1}."""
    xi = np.asarray(xi, dtype=complex)
    e_plus = np.exp(1j * xi)
    e_minus = np.exp(-1j * xi)
    t = np.empty(xi.shape + (2, 2), dtype=complex)
    t[..., 0, 0] = e_minus / c.a
    t[..., 0, 1] = -c.b / c.a
    t[..., 1, 0] = -np.conj(c.b) / np.conj(c.d)
    t[..., 1, 1] = e_plus / np.conj(c.d)
    return t


def transfer_product(cs: CoinSequence, xi) -> np.ndarray:
    """Ordered product T_0 T_1 ... T_{n0} at xi (batched over array xi)."""
    out = local_transfer(cs.coin_at(0), xi)
    for n in range(1, cs.n0 + 1):
        out = out @ local_transfer(cs.coin_at(n), xi)
    return out


@dataclass(frozen=True)
class TransferPolynomial:
    """p in monic form together with the leading coefficient it was scaled by.

    coeffs is lowest degree first with coeffs[-1] == 1; the original
    polynomial is leading * p_monic.  The degree always equals n0 because
    the leading coefficient of the unscaled p is the product of 1/d_n over
    the window, which assumption (A2) keeps away from zero.
    """

    coeffs: np.ndarray
    leading: complex

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=complex)
        c.flags.writeable = False
        object.__setattr__(self, "coeffs", c)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, mu) -> np.ndarray:
        """Evaluate the monic polynomial at mu (scalar or array)."""
        mu = np.asarray(mu, dtype=complex)
        out = np.zeros(mu.shape, dtype=complex)
        for c in self.coeffs[::-1]:
            out = out * mu + c
        return out[()] if out.shape == () else out


def _poly_mat_mul(a, b):
    """Product of 2x2 matrices whose entries are coefficient arrays in z."""
    out = [[None, None], [None, None]]
    for i in range(2):
        for j in range(2):
            t0 = np.convolve(a[i][0], b[0][j])
            t1 = np.convolve(a[i][1], b[1][j])
            acc = np.zeros(max(len(t0), len(t1)), dtype=complex)
            acc[: len(t0)] += t0
            acc[: len(t1)] += t1
            out[i][j] = acc
    return out


def transfer_polynomial(cs: CoinSequence) -> TransferPolynomial:
    """Extract p from the transfer product by exact polynomial recursion.

    Each local factor is multiplied by z, which clears the e^{i xi} and
    leaves a polynomial matrix A_n(z) = z T_n.  Their ordered product has
    a 22 entry equal to z^{n0+1} TT_22, supported on even powers z^2 and
    above; the structural zero coefficients come out as exact 0.0 because
    every contribution to them carries an exactly zero factor.

    The numeric identity e^{-(n0+1) i xi} TT_22 = e^{-2 i xi} p(e^{-2 i xi})
    is then checked at 20 fixed pseudo-random xi; a failure means a bug in
    this module, not bad input.
    """
    prod = None
    for n in range(cs.n0 + 1):
        u = cs.coin_at(n)
        a_n = [
            [np.array([1 / np.conj(u.a)]), np.array([0, -np.conj(u.c) / np.conj(u.a)])],
            [np.array([0, -u.c / u.d]), np.array([0, 0, 1 / u.d])],
        ]
        prod = a_n if prod is None else _poly_mat_mul(prod, a_n)
    full = prod[1][1]
    scale = np.max(np.abs(full))
    stray = np.abs(full[0]) + np.abs(full[1::2]).sum()
    if stray > 1e-13 * scale:
        raise RelationCheckFailed(
            f"transfer product lost its parity structure (stray mass {stray:.3e})"
        )
    p = full[2::2]
    leading = complex(p[-1])
    monic = p / leading
    monic[-1] = 1.0
    tp = TransferPolynomial(monic, leading)

    rng = np.random.default_rng(20240901)
    xs = np.concatenate(
        [
            rng.uniform(-np.pi, np.pi, 10).astype(complex),
            rng.uniform(-np.pi, np.pi, 10) + 1j * rng.uniform(-1.5, 1.5, 10),
        ]
    )
    t22 = transfer_product(cs, xs)[..., 1, 1]
    lhs = np.exp(-1j * (cs.n0 + 1) * xs) * t22
    mu = np.exp(-2j * xs)
    rhs = mu * leading * tp(mu)
    err = np.max(np.abs(lhs - rhs) / np.maximum(1.0, np.abs(lhs)))
    if err > 1e-10:
        raise RelationCheckFailed(
            f"transfer polynomial relation residual {err:.3e} exceeds 1e-10"
        )
    return tp
