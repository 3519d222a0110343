"""Local coin matrices and their hyperbolic parameterization.

A coin is a 2x2 unitary ``[[a, b], [c, d]]`` acting on the two chirality
components at one lattice site.  A walk instance is a finite list of coins
on sites ``0..n0`` with the identity everywhere else.  Every coin used here
must have ``a != 0``; that is what makes transfer matrices well defined.

Coins with ``a != 0`` are in bijection with triples ``(p, q, theta)`` on the
hyperboloid ``|p|^2 - |q|^2 = 1`` (theta reduced into ``[0, pi)``), under
which composing scatterers becomes a plain 2x2 matrix product of hyperbolic
transfer factors.  ``s_product`` realizes that group law on coins.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    A2Violated,
    ConfigParse,
    ConstraintViolated,
    NotUnitary,
    ProductLeavesS,
    UnsupportedN0,
)

__all__ = [
    "Coin",
    "CoinSequence",
    "PQTheta",
    "validate_coin",
    "identity_coin",
    "rotation_coin",
    "hadamard_coin",
    "coin_to_pqtheta",
    "pqtheta_to_S",
    "pqtheta_to_T",
    "coin_transfer_factor",
    "s_product",
    "coin_from_json",
    "coin_to_json",
    "sequence_from_json",
    "sequence_to_json",
]

UNITARITY_TOL = 1e-12
A2_TOL = 1e-14
HYPERBOLOID_TOL = 1e-8


@dataclass(frozen=True)
class Coin:
    """One site's 2x2 unitary coin, stored entrywise."""

    a: complex
    b: complex
    c: complex
    d: complex

    @property
    def matrix(self) -> np.ndarray:
        return np.array([[self.a, self.b], [self.c, self.d]], dtype=complex)

    @property
    def p_block(self) -> np.ndarray:
        """Upper row projection |L><L| U, the left-mover emitter."""
        return np.array([[self.a, self.b], [0.0, 0.0]], dtype=complex)

    @property
    def q_block(self) -> np.ndarray:
        """Lower row projection |R><R| U, the right-mover emitter."""
        return np.array([[0.0, 0.0], [self.c, self.d]], dtype=complex)

    def is_identity(self) -> bool:
        return self.a == 1 and self.b == 0 and self.c == 0 and self.d == 1


_IDENTITY = Coin(1.0 + 0.0j, 0.0j, 0.0j, 1.0 + 0.0j)


def identity_coin() -> Coin:
    return _IDENTITY


def rotation_coin(r: float) -> Coin:
    """Real rotation-type coin with a = d = sqrt(1 - r^2), b = r, c = -r."""
    if not -1.0 < r < 1.0:
        raise A2Violated(f"rotation parameter must satisfy |r| < 1, got {r}")
    s = math.sqrt(1.0 - r * r)
    return Coin(complex(s), complex(r), complex(-r), complex(s))


def hadamard_coin() -> Coin:
    s = 1.0 / math.sqrt(2.0)
    return Coin(complex(s), complex(s), complex(s), complex(-s))


def validate_coin(matrix) -> Coin:
    """Check a 2x2 array for unitarity and a nonzero a-entry.

    Parameters
    ----------
    matrix : array-like, shape (2, 2)
        Candidate coin.

    Returns
    -------
    Coin
        The entries of ``matrix``, bit-identical.

    Raises
    ------
    NotUnitary
        If ``max |U* U - I|`` exceeds 1e-12.
    A2Violated
        If ``|a| <= 1e-14``.
    """
    m = np.asarray(matrix, dtype=complex)
    if m.shape != (2, 2):
        raise NotUnitary(f"coin must be 2x2, got shape {m.shape}")
    residual = np.max(np.abs(m.conj().T @ m - np.eye(2)))
    if residual > UNITARITY_TOL:
        raise NotUnitary(f"unitarity residual {residual:.3e} exceeds {UNITARITY_TOL}")
    if abs(m[0, 0]) <= A2_TOL:
        raise A2Violated("coin has |a| below 1e-14, transfer matrices undefined")
    return Coin(complex(m[0, 0]), complex(m[0, 1]), complex(m[1, 0]), complex(m[1, 1]))


@dataclass(frozen=True)
class CoinSequence:
    """Coins on the perturbed sites 0..n0; identity everywhere else."""

    n0: int
    coins: tuple[Coin, ...]

    def __post_init__(self):
        if self.n0 < 0:
            raise UnsupportedN0(f"n0 must be nonnegative, got {self.n0}")
        if len(self.coins) != self.n0 + 1:
            raise ValueError(
                f"need n0 + 1 = {self.n0 + 1} coins, got {len(self.coins)}"
            )
        for u in self.coins:
            if not isinstance(u, Coin):
                raise TypeError("coins must be Coin instances, use validate_coin")

    def coin_at(self, n: int) -> Coin:
        """Coin at site n (identity outside the perturbed window)."""
        if 0 <= n <= self.n0:
            return self.coins[n]
        return _IDENTITY

    def entry_arrays(self, sites: np.ndarray):
        """Vectorized (a, b, c, d) entries for an integer array of sites."""
        sites = np.asarray(sites)
        a = np.ones(sites.shape, dtype=complex)
        b = np.zeros(sites.shape, dtype=complex)
        c = np.zeros(sites.shape, dtype=complex)
        d = np.ones(sites.shape, dtype=complex)
        inside = (sites >= 0) & (sites <= self.n0)
        for idx in np.nonzero(inside)[0]:
            u = self.coins[int(sites[idx])]
            a[idx], b[idx], c[idx], d[idx] = u.a, u.b, u.c, u.d
        return a, b, c, d


@dataclass(frozen=True)
class PQTheta:
    """Point (p, q, theta) with |p|^2 - |q|^2 = 1, theta in [0, pi)."""

    p: complex
    q: complex
    theta: float

    def __post_init__(self):
        defect = abs(abs(self.p) ** 2 - abs(self.q) ** 2 - 1.0)
        if defect > HYPERBOLOID_TOL:
            raise ConstraintViolated(
                f"|p|^2 - |q|^2 deviates from 1 by {defect:.3e}"
            )


def coin_to_pqtheta(coin: Coin) -> PQTheta:
    """Map a coin to its canonical hyperboloid triple.

    The representative has theta in [0, pi) and reproduces the coin exactly
    through ``pqtheta_to_S`` (round trip to 1e-12).
    """
    mod_a = abs(coin.a)
    if mod_a <= A2_TOL:
        raise A2Violated("coin has |a| below 1e-14")
    half_arg_ad = cmath.phase(coin.a * coin.d) / 2.0
    p = cmath.exp(1j * half_arg_ad) / mod_a
    q = coin.b.conjugate() * p
    theta = cmath.phase(coin.a / coin.d) / 2.0
    if theta < 0.0:
        # equivalence (p, q, theta) ~ (-p, -q, theta + pi)
        theta += math.pi
        p, q = -p, -q
    # the half-angle formulas fix p only up to sign; pick the branch that
    # reproduces the a-entry rather than its negative
    a_back = cmath.exp(1j * theta) / p.conjugate()
    if abs(a_back - coin.a) > abs(a_back + coin.a):
        p, q = -p, -q
    return PQTheta(p, q, theta)


def pqtheta_to_S(x: PQTheta) -> Coin:
    """Inverse of :func:`coin_to_pqtheta`."""
    defect = abs(abs(x.p) ** 2 - abs(x.q) ** 2 - 1.0)
    if defect > HYPERBOLOID_TOL:
        raise ConstraintViolated(f"hyperboloid defect {defect:.3e} exceeds 1e-8")
    pbar_inv = 1.0 / x.p.conjugate()
    eit = cmath.exp(1j * x.theta)
    m = np.array(
        [
            [eit * pbar_inv, x.q.conjugate() * pbar_inv],
            [-x.q * pbar_inv, pbar_inv / eit],
        ],
        dtype=complex,
    )
    return validate_coin(m)


def pqtheta_to_T(x: PQTheta) -> np.ndarray:
    """Hyperbolic transfer factor e^{i theta} [[p, conj(q)], [q, conj(p)]]."""
    eit = cmath.exp(1j * x.theta)
    return np.array(
        [[eit * x.p, eit * x.q.conjugate()], [eit * x.q, eit * x.p.conjugate()]],
        dtype=complex,
    )


def coin_transfer_factor(coin: Coin) -> np.ndarray:
    """2x2 factor [[1/conj(a), b/d], [conj(b)/conj(a), 1/d]] of a coin.

    This equals the site transfer matrix at spectral parameter zero and is
    the image of the coin on the hyperbolic side of the parameterization.
    """
    a, b, d = coin.a, coin.b, coin.d
    return np.array(
        [
            [1.0 / a.conjugate(), b / d],
            [b.conjugate() / a.conjugate(), 1.0 / d],
        ],
        dtype=complex,
    )


def _transfer_to_pqtheta(t: np.ndarray) -> PQTheta:
    det = t[0, 0] * t[1, 1] - t[0, 1] * t[1, 0]
    theta = cmath.phase(det) / 2.0
    p = cmath.exp(-1j * theta) * t[0, 0]
    q = cmath.exp(-1j * theta) * t[1, 0]
    if theta < 0.0:
        theta += math.pi
        p, q = -p, -q
    return PQTheta(p, q, theta)


def s_product(s1: Coin, s2: Coin) -> Coin:
    """Coin group product: multiply the hyperbolic factors, map back.

    Raises
    ------
    ProductLeavesS
        If the resulting coin would have a vanishing a-entry.
    """
    t = coin_transfer_factor(s1) @ coin_transfer_factor(s2)
    try:
        x = _transfer_to_pqtheta(t)
        return pqtheta_to_S(x)
    except (A2Violated, ConstraintViolated) as exc:
        raise ProductLeavesS(str(exc)) from exc


# ---------------------------------------------------------------------------
# JSON forms used by config files


def coin_from_json(obj) -> Coin:
    """Parse one coin from its config form.

    Accepts either ``{"rotation": r}`` or ``{"a": [re, im], "b": ..., "c":
    ..., "d": ...}``.
    """
    if not isinstance(obj, dict):
        raise ConfigParse(f"coin entry must be an object, got {type(obj).__name__}")
    if "rotation" in obj:
        extra = set(obj) - {"rotation"}
        if extra:
            raise ConfigParse(f"rotation coin has unexpected keys {sorted(extra)}")
        r = obj["rotation"]
        if not isinstance(r, (int, float)):
            raise ConfigParse("rotation parameter must be a real number")
        return rotation_coin(float(r))
    try:
        entries = [_complex_from_pair(obj[k]) for k in ("a", "b", "c", "d")]
    except KeyError as exc:
        raise ConfigParse(f"coin entry missing key {exc}") from exc
    return validate_coin(np.array(entries, dtype=complex).reshape(2, 2))


def _complex_from_pair(pair) -> complex:
    if (
        not isinstance(pair, (list, tuple))
        or len(pair) != 2
        or not all(isinstance(v, (int, float)) for v in pair)
    ):
        raise ConfigParse(f"complex values must be [re, im] pairs, got {pair!r}")
    return complex(pair[0], pair[1])


def coin_to_json(coin: Coin) -> dict:
    return {
        "a": [coin.a.real, coin.a.imag],
        "b": [coin.b.real, coin.b.imag],
        "c": [coin.c.real, coin.c.imag],
        "d": [coin.d.real, coin.d.imag],
    }


def sequence_from_json(obj) -> CoinSequence:
    if not isinstance(obj, dict):
        raise ConfigParse("config must be a JSON object")
    if "n0" not in obj or "coins" not in obj:
        raise ConfigParse('config needs "n0" and "coins" keys')
    n0 = obj["n0"]
    if not isinstance(n0, int) or isinstance(n0, bool) or n0 < 0:
        raise ConfigParse(f'"n0" must be a nonnegative integer, got {n0!r}')
    coins_raw = obj["coins"]
    if not isinstance(coins_raw, list) or len(coins_raw) != n0 + 1:
        raise ConfigParse(f'"coins" must list n0 + 1 = {n0 + 1} coins')
    coins = tuple(coin_from_json(c) for c in coins_raw)
    return CoinSequence(n0, coins)


def sequence_to_json(cs: CoinSequence) -> dict:
    return {"n0": cs.n0, "coins": [coin_to_json(c) for c in cs.coins]}
