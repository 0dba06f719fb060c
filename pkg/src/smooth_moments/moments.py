"""Moments ``I_rho = int_0^1 |S(theta)|^rho d theta`` and additive energy.

Even moments ``I_{2s}`` are computed exactly as ``sum_m r_s(m)^2`` where
``r_s`` is the s-fold representation function of the set. Any moment can be
approximated by the equispaced Riemann sum ``(1/N) sum_j |S(j/N)|^rho``,
which is exact for ``rho = 2s`` once ``N > s (x - 1)``: ``|S|^{2s}`` is then a
trigonometric polynomial whose frequencies do not alias on the grid.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

import numpy as np

from .errors import CapacityError, ConvergenceError, DomainError
from .expsum import MAX_GRID, grid_values
from .ntt import MAX_NTT_LENGTH, convolve_exact
from .smooth_core import SmoothSet

_INT64_CEILING = 1 << 63


class Method(str, Enum):
    EXACT_CONVOLUTION = "EXACT_CONVOLUTION"
    GRID = "GRID"
    GRID_REFINED = "GRID_REFINED"


@dataclass(frozen=True)
class MomentResult:
    rho: float
    value: float | int
    method: Method
    N: int = 0
    error_estimate: float = 0.0
    x: int | None = None
    y: int | None = None
    psi: int | None = None


@dataclass(frozen=True, eq=False)
class RepCounts:
    """Representation counts ``counts[m] = #{(n_1..n_s) in S^s : n_1 + ... + n_s = m}``.

    ``counts`` is indexed directly by ``m`` (length ``s*x + 1``); entries
    below ``m = s`` are zero.
    """

    s: int
    counts: np.ndarray
    total: int

    def r(self, m: int) -> int:
        return int(self.counts[m]) if 0 <= m < self.counts.size else 0


def even_integer(rho) -> int | None:
    """Return ``s`` if ``rho == 2s`` for a positive integer ``s``, else ``None``."""
    try:
        f = Fraction(rho)
    except (TypeError, ValueError):
        return None
    if f.denominator == 1 and f > 0 and f.numerator % 2 == 0:
        return f.numerator // 2
    return None


def alias_free_size(x: int, s: int) -> int:
    """Smallest grid size that makes the Riemann sum of ``|S|^{2s}`` exact."""
    return s * (x - 1) + 1


def representation_counts(s_set: SmoothSet, s: int) -> RepCounts:
    """Exact s-fold representation function by iterated integer convolution."""
    if s < 1:
        raise DomainError(f"s must be >= 1, got {s}")
    psi = s_set.count
    if psi**s >= _INT64_CEILING:
        raise CapacityError("Psi^s", psi**s, _INT64_CEILING - 1)
    length = s * s_set.x + 1
    if length > MAX_NTT_LENGTH:
        raise CapacityError("s*x", length - 1, MAX_NTT_LENGTH - 1)
    ind = s_set.indicator()
    counts = ind
    for _ in range(s - 1):
        counts = convolve_exact(counts, ind)
    counts.flags.writeable = False
    return RepCounts(s, counts, int(counts.sum()))


def _sum_squares(c: np.ndarray, psi: int, s: int) -> int:
    # sum r^2 = I_{2s} <= Psi^{2s-1}
    if psi ** (2 * s - 1) < _INT64_CEILING:
        return int(np.dot(c, c))
    nz = c[c != 0].astype(object)
    return int(np.dot(nz, nz))


def even_moment_exact(s_set: SmoothSet, s: int) -> MomentResult:
    """``I_{2s}`` as the exact number of solutions of ``n_1+..+n_s = n_{s+1}+..+n_{2s}``."""
    rc = representation_counts(s_set, s)
    value = _sum_squares(rc.counts, s_set.count, s)
    return MomentResult(
        2 * s, value, Method.EXACT_CONVOLUTION, 0, 0.0, s_set.x, s_set.y, s_set.count
    )


def energy(s_set: SmoothSet) -> MomentResult:
    """Additive energy, the number of quadruples with ``n_1 + n_2 = n_3 + n_4``."""
    return even_moment_exact(s_set, 2)


def _power_mean(vals: np.ndarray, rho: float, s: int | None) -> tuple[float, np.ndarray]:
    sq = vals.real**2 + vals.imag**2
    powers = sq**s if s is not None else sq ** (rho / 2.0)
    return math.fsum(powers) / vals.size, powers


def moment_quadrature(s_set: SmoothSet, rho: float, N: int) -> MomentResult:
    """Riemann sum ``(1/N) sum_{j<N} |S(j/N)|^rho`` on the nodes ``j/N`` (0 included).

    ``error_estimate`` is 0 when ``rho`` is even and ``N`` is alias-free;
    otherwise it is the relative gap to the half grid (``N`` even) or
    ``inf`` when no estimate is available.
    """
    if not rho > 0:
        raise DomainError(f"rho must be positive, got {rho}")
    s = even_integer(rho)
    vals = grid_values(s_set, N)
    value, powers = _power_mean(vals, rho, s)
    if s is not None and N >= alias_free_size(s_set.x, s):
        err = 0.0
    elif N % 2 == 0 and N >= 2 and value > 0:
        half = math.fsum(powers[::2]) / (N // 2)
        err = abs(value - half) / value
    else:
        err = math.inf
    return MomentResult(float(rho), value, Method.GRID, int(N), err, s_set.x, s_set.y, s_set.count)


def moment_refined(
    s_set: SmoothSet, rho: float, rel_tol: float, max_N: int = MAX_GRID
) -> MomentResult:
    """Double the grid from ``N = 2x`` until two successive sums agree to ``rel_tol``.

    The returned ``error_estimate`` is the last relative change, a heuristic
    rather than a bound. Raises ``ConvergenceError`` when ``max_N`` is
    reached first.
    """
    if not 0 < rel_tol < 1:
        raise DomainError(f"rel_tol must lie in (0, 1), got {rel_tol}")
    N = max(2, 2 * s_set.x)
    if N > max_N:
        raise CapacityError("N", N, max_N)
    prev, cur = math.nan, moment_quadrature(s_set, rho, N).value
    while True:
        if 2 * N > max_N:
            raise ConvergenceError("grid refinement hit its cap", cur, prev, N)
        N *= 2
        prev, cur = cur, moment_quadrature(s_set, rho, N).value
        change = abs(cur - prev) / abs(cur) if cur else abs(cur - prev)
        if change < rel_tol:
            return MomentResult(
                float(rho), cur, Method.GRID_REFINED, N, change, s_set.x, s_set.y, s_set.count
            )
