"""Smooth-number sets, their counting function and the exponent system.

Logarithms are natural throughout. The number 1 counts as smooth for every
``y >= 1`` (it has no prime divisors).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from numbers import Rational

import numpy as np

from .errors import CapacityError, DomainError

#: Largest ``x`` accepted by the sieve. Memory use is about ``2.2 * x`` bytes.
MAX_SIEVE_X = 10**8

# Below this size a cached largest-prime-factor table answers every (x, y)
# query with one comparison; above it a one-shot marking sieve is used.
_LPF_CACHE_LIMIT = 1 << 22


def primes_upto(n: int) -> np.ndarray:
    """Primes ``p <= n`` as an ascending int64 array (Eratosthenes)."""
    if n < 2:
        return np.zeros(0, dtype=np.int64)
    is_p = np.ones(n + 1, dtype=bool)
    is_p[:2] = False
    is_p[4::2] = False
    for p in range(3, math.isqrt(n) + 1, 2):
        if is_p[p]:
            is_p[p * p :: 2 * p] = False
    return np.flatnonzero(is_p).astype(np.int64)


@lru_cache(maxsize=4)
def _lpf_table(n: int) -> np.ndarray:
    # lpf[m] = largest prime factor of m (lpf[0] = lpf[1] = 1).
    lpf = np.ones(n + 1, dtype=np.uint32)
    primes = primes_upto(n)
    t = math.isqrt(n)
    small = primes[primes <= t]
    for p in small.tolist():
        lpf[p::p] = p
    # Every m <= n has at most one prime factor above sqrt(n); writing those
    # last makes them win over the small ones.
    large = primes[primes > t]
    if large.size:
        for k in range(1, n // int(large[0]) + 1):
            ps = large[: np.searchsorted(large, n // k, side="right")]
            lpf[k * ps] = ps
    lpf.flags.writeable = False
    return lpf


def _nonsmooth_marking(x: int, y: int) -> np.ndarray:
    # Boolean mask over [0, x] of y-smooth integers, built by striking out
    # multiples of every prime in (y, x].
    mask = np.ones(x + 1, dtype=bool)
    mask[0] = False
    primes = primes_upto(x)
    primes = primes[primes > y]
    t = math.isqrt(x)
    for p in primes[primes <= t].tolist():
        mask[p::p] = False
    large = primes[primes > t]
    if large.size:
        for k in range(1, x // int(large[0]) + 1):
            ps = large[: np.searchsorted(large, x // k, side="right")]
            mask[k * ps] = False
    return mask


def _check_range(x: int, y: int) -> None:
    if x < 1 or y < 1:
        raise DomainError(f"need x >= 1 and y >= 1, got x={x}, y={y}")
    if x > MAX_SIEVE_X:
        raise CapacityError("x", x, MAX_SIEVE_X)


def smooth_mask(x: int, y: int) -> np.ndarray:
    """Boolean array ``m`` of length ``x + 1`` with ``m[n]`` true iff ``1 <= n <= x`` is y-smooth."""
    x, y = int(x), int(y)
    _check_range(x, y)
    if y >= x:
        mask = np.ones(x + 1, dtype=bool)
        mask[0] = False
        return mask
    if x <= _LPF_CACHE_LIMIT:
        size = max(1 << 16, 1 << (x - 1).bit_length())
        lpf = _lpf_table(size)[: x + 1]
        mask = lpf <= y
        mask[0] = False
        return mask
    return _nonsmooth_marking(x, y)


@dataclass(frozen=True, eq=False)
class SmoothSet:
    """The y-smooth integers in ``[1, x]``.

    ``members`` is a read-only ascending int64 array; ``count`` is Psi(x, y).
    """

    x: int
    y: int
    members: np.ndarray

    @property
    def count(self) -> int:
        return int(self.members.size)

    def __len__(self) -> int:
        return self.count

    def __contains__(self, n) -> bool:
        i = np.searchsorted(self.members, n)
        return bool(i < self.members.size and self.members[i] == n)

    def __eq__(self, other) -> bool:
        if not isinstance(other, SmoothSet):
            return NotImplemented
        return (self.x, self.y) == (other.x, other.y) and np.array_equal(
            self.members, other.members
        )

    def __hash__(self) -> int:
        return hash((self.x, self.y, self.count))

    def __repr__(self) -> str:
        return f"SmoothSet(x={self.x}, y={self.y}, count={self.count})"

    def indicator(self) -> np.ndarray:
        """0/1 int64 vector ``v`` of length ``x + 1`` with ``v[n] = 1`` iff ``n`` is a member."""
        v = np.zeros(self.x + 1, dtype=np.int64)
        v[self.members] = 1
        return v


def sieve_smooth(x: int, y: int) -> SmoothSet:
    """Enumerate S(x, y).

    Raises ``DomainError`` for ``x < 1`` or ``y < 1`` and ``CapacityError``
    above ``MAX_SIEVE_X``.
    """
    mask = smooth_mask(x, y)
    members = np.flatnonzero(mask).astype(np.int64)
    members.flags.writeable = False
    return SmoothSet(int(x), int(y), members)


def psi(x: int, y: int) -> int:
    """Psi(x, y), the number of y-smooth integers in ``[1, x]``."""
    x, y = int(x), int(y)
    _check_range(x, y)
    if y >= x:
        return x
    return int(np.count_nonzero(smooth_mask(x, y)))


def y_from_K(x: int, K) -> int:
    """``floor((ln x) ** K)``, clipped below at 1."""
    if x < 2:
        return 1
    return max(1, math.floor(math.log(x) ** float(K)))


def K_from_y(x: int, y: int) -> float | None:
    """The effective exponent ``ln y / ln ln x``; ``None`` when ``ln ln x <= 0`` or ``y < 2``."""
    if x <= 2 or y < 2:
        return None
    return math.log(y) / math.log(math.log(x))


def saddle_alpha(x: float, y: float) -> float:
    """Leading-order saddle point ``log(1 + y/log x) / log y``.

    The ``1 + o(1)`` factor of the asymptotic is dropped. Meaningful for
    ``3 <= y <= x``.
    """
    if y <= 1 or y > x:
        raise DomainError(f"saddle point needs 1 < y <= x, got x={x}, y={y}")
    return math.log1p(y / math.log(x)) / math.log(y)


def _as_fraction(v) -> Fraction:
    if isinstance(v, Fraction):
        return v
    if isinstance(v, (int, Rational)):
        return Fraction(v)
    if isinstance(v, str):
        return Fraction(v.strip())
    if isinstance(v, float):
        if not math.isfinite(v):
            raise DomainError(f"non-finite parameter {v}")
        return Fraction(v)
    raise TypeError(f"cannot convert {v!r} to a rational")


@dataclass(frozen=True)
class ExponentParams:
    """Exact exponent system derived from K (and optionally rho).

    ``eta`` and ``xi`` are ``None`` when no ``rho`` is attached; ``zeta`` is
    ``None`` at ``K = 1`` where its denominator vanishes.
    """

    K: Fraction
    kappa: Fraction
    beta: Fraction
    gamma: Fraction
    zeta: Fraction | None
    epsilon: float
    rho: Fraction | None = None
    eta: Fraction | None = None
    xi: Fraction | None = None

    @property
    def in_theory(self) -> bool:
        """True when K > 3, the standing hypothesis of every bound in the package."""
        return self.K > 3

    def with_rho(self, rho) -> "ExponentParams":
        return exponent_params(self.K, rho, self.epsilon)


def exponent_params(K, rho=None, epsilon: float = 0.05) -> ExponentParams:
    """Build the exponent system in exact rational arithmetic.

    ``K`` and ``rho`` may be ints, Fractions, decimal strings or floats
    (floats are converted exactly). ``rho`` may be omitted; any ``rho > 0``
    is accepted so that boundary cases can be evaluated by the predicates.
    """
    K = _as_fraction(K)
    if K <= 0:
        raise DomainError(f"K must be positive, got {K}")
    if not epsilon > 0:
        raise DomainError(f"epsilon must be positive, got {epsilon}")
    kappa = 1 / K
    beta = (1 - 3 * kappa) / 4
    gamma = 2 * beta
    zden = 1 + 5 * kappa - 6 * kappa**2
    zeta = kappa * (1 - 12 * kappa) / zden if zden != 0 else None
    eta = xi = None
    if rho is not None:
        rho = _as_fraction(rho)
        if rho <= 0:
            raise DomainError(f"rho must be positive, got {rho}")
        eta = kappa * (rho - 1) / (2 + 3 * kappa * rho)
        xi = 1 - 2 * eta
    return ExponentParams(
        K=K,
        kappa=kappa,
        beta=beta,
        gamma=gamma,
        zeta=zeta,
        epsilon=float(epsilon),
        rho=rho,
        eta=eta,
        xi=xi,
    )
