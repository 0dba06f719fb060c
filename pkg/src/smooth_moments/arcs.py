"""Dirichlet arcs, classification of frequencies and per-arc moment decomposition.

The arcs are ``M(a, q, Q) = {theta : |theta - a/q| <= 1/(qQ)}`` for
``1 <= a <= q <= Q``, ``gcd(a, q) = 1``. Frequencies live on the circle
``R/Z``: ``a = q`` (i.e. ``q = 1``) stands for the point 0 = 1.

Classification turns the cover into a partition: ``theta`` goes to the
smallest ``q`` with ``||q theta|| < 1/Q`` and ``a`` the nearest integer to
``q theta``. The smallest such ``q`` is always a continued-fraction
convergent denominator of ``theta`` (best-approximation property), and it is
at most ``floor(Q)`` by Dirichlet's theorem, so the label exists and
satisfies the closed-arc predicate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

import numpy as np

from .errors import CapacityError, DomainError, ValidityError
from .expsum import grid_values
from .moments import alias_free_size, even_integer
from .smooth_core import ExponentParams, SmoothSet

MAX_FAREY_Q = 5000


class Split(str, Enum):
    THM1 = "THM1"
    THM2 = "THM2"

    @classmethod
    def parse(cls, v) -> "Split":
        return v if isinstance(v, cls) else cls(str(v).upper())


@dataclass(frozen=True)
class ArcLabel:
    a: int
    q: int
    Q: float
    theta: float
    distance: float
    sharp: bool
    L: float

    @property
    def center(self) -> Fraction:
        return Fraction(self.a, self.q)

    @property
    def halfwidth(self) -> float:
        return 1.0 / (self.q * self.Q)


@dataclass(frozen=True)
class ArcDecomposition:
    rho: float
    Q: float
    N: int
    split: Split
    split_q: float
    part1: float
    part2: float
    sharp_part: float
    flat_part: float
    total: float
    per_arc: list[tuple[int, int, float]]


def farey_fractions(Q) -> list[tuple[int, int]]:
    """All reduced ``(a, q)`` with ``1 <= a <= q <= floor(Q)``, sorted by ``a/q``."""
    n = math.floor(Q)
    if n < 1:
        raise DomainError(f"Q must be >= 1, got {Q}")
    if n > MAX_FAREY_Q:
        raise CapacityError("Q", n, MAX_FAREY_Q)
    out = []
    # neighbour recurrence of the Farey sequence, starting after 0/1
    a, b, c, d = 0, 1, 1, n
    while c <= n:
        out.append((c, d))
        k = (n + b) // d
        a, b, c, d = c, d, k * c - a, k * d - b
    return out


def convergent_denominators(num: int, den: int):
    """Yield the continued-fraction convergent denominators of ``num/den`` in ``[0, 1)``."""
    q_prev, q = 0, 1
    yield 1
    u, v = den, num
    while v:
        t = u // v
        q_prev, q = q, t * q + q_prev
        yield q
        u, v = v, u - t * v


def classify_theta(theta: float, Q, x: int) -> ArcLabel:
    """Label ``theta`` with its Dirichlet arc (see the module docstring for the rule).

    The arithmetic is exact on the binary value of ``theta`` and of ``Q``.
    """
    if Q < 1:
        raise DomainError(f"Q must be >= 1, got {Q}")
    t = math.fmod(float(theta), 1.0)
    if t < 0:
        t += 1.0
    if t == 1.0:
        t = 0.0
    num, den = t.as_integer_ratio()
    Qf = Fraction(Q)
    qmax = math.floor(Qf)
    for q in convergent_denominators(num, den):
        if q > qmax:
            break
        r = q * num % den
        dist = min(r, den - r)
        if dist * Qf.numerator < den * Qf.denominator:
            a = (q * num) // den + (1 if den - r < r else 0)
            a = a % q or q
            distance = dist / (den * q)
            return ArcLabel(a, q, float(Q), t, distance, dist * x <= den * q, 1.0 + x * distance)
    raise AssertionError(f"no Dirichlet label for theta={theta!r}, Q={Q!r}")  # pragma: no cover


def classify_grid(N: int, Q: float, x: int) -> dict[str, np.ndarray]:
    """Vectorised ``classify_theta`` for the nodes ``j/N``, ``j = 0..N-1``.

    Returns int64 arrays ``a``, ``q``, ``dist`` (``|q j - a N|``) and a bool
    array ``sharp``; the distance of node ``j`` to its center is
    ``dist[j] / (N q[j])``.
    """
    if Q < 1:
        raise DomainError(f"Q must be >= 1, got {Q}")
    N = int(N)
    qmax = math.floor(Q)
    j = np.arange(N, dtype=np.int64)
    q_out = np.zeros(N, dtype=np.int64)
    d_out = np.zeros(N, dtype=np.int64)

    idx = j.copy()
    u = np.full(N, N, dtype=np.int64)
    v = j.copy()
    q_prev = np.zeros(N, dtype=np.int64)
    q = np.ones(N, dtype=np.int64)
    while idx.size:
        r = q * j[idx] % N
        dist = np.minimum(r, N - r)
        hit = (dist * float(Q) < N) & (q <= qmax)
        q_out[idx[hit]] = q[hit]
        d_out[idx[hit]] = dist[hit]
        keep = ~hit
        if np.any(keep & ((v == 0) | (q > qmax))):
            raise AssertionError("grid node without a Dirichlet label")  # pragma: no cover
        idx, u, v, q_prev, q = idx[keep], u[keep], v[keep], q_prev[keep], q[keep]
        t = u // v
        q_prev, q = q, t * q + q_prev
        u, v = v, u - t * v

    r = q_out * j % N
    a = q_out * j // N + (N - r < r)
    a = np.where(a % q_out == 0, q_out, a % q_out)
    sharp = d_out * x <= N * q_out
    return {"a": a, "q": q_out, "dist": d_out, "sharp": sharp}


def split_threshold(x: int, Q: float, params: ExponentParams, split) -> float:
    """The q-threshold separating part 1 from part 2."""
    split = Split.parse(split)
    if split is Split.THM1:
        return x ** (0.5 - params.epsilon)
    return x / Q


def arc_decompose(
    s_set: SmoothSet, rho: float, Q: float, N: int, params: ExponentParams, split
) -> ArcDecomposition:
    """Distribute the Riemann sum of ``|S|^rho`` over the classified arcs.

    Part 1 collects arcs with ``q <= split_q``, part 2 the rest; part 1 is
    further divided into sharp nodes (within ``1/x`` of the center) and flat
    ones. For even ``rho`` the grid must be alias-free so the parts add up to
    the exact moment.
    """
    split = Split.parse(split)
    s = even_integer(rho)
    if s is not None and N < alias_free_size(s_set.x, s):
        raise DomainError(
            f"N={N} is below the alias-free size {alias_free_size(s_set.x, s)} for rho={rho}"
        )
    x = s_set.x
    vals = grid_values(s_set, N)
    sq = vals.real**2 + vals.imag**2
    w = (sq**s if s is not None else sq ** (rho / 2.0)) / N
    lab = classify_grid(N, Q, x)
    q, a = lab["q"], lab["a"]
    split_q = split_threshold(x, Q, params, split)
    in1 = q <= split_q
    sharp1 = in1 & lab["sharp"]

    key = q * (N + 1) + a
    keys, inv = np.unique(key, return_inverse=True)
    sums = np.bincount(inv, weights=w, minlength=keys.size)
    per_arc = [
        (int(k % (N + 1)), int(k // (N + 1)), float(c)) for k, c in zip(keys.tolist(), sums)
    ]
    part1 = math.fsum(w[in1])
    return ArcDecomposition(
        rho=float(rho),
        Q=float(Q),
        N=int(N),
        split=split,
        split_q=float(split_q),
        part1=part1,
        part2=math.fsum(w[~in1]),
        sharp_part=math.fsum(w[sharp1]),
        flat_part=math.fsum(w[in1 & ~lab["sharp"]]),
        total=math.fsum(w),
        per_arc=per_arc,
    )


def optimal_Q(x: int, params: ExponentParams, rule) -> float:
    """``x^(1/2 + eps)`` for THM1, ``x^xi`` with ``xi = 1 - 2 eta`` for THM2.

    THM2 needs ``2 < rho < 2K + 4`` (so that ``xi >= 1/2``) and raises
    ``ValidityError`` otherwise.
    """
    rule = Split.parse(rule)
    if rule is Split.THM1:
        return float(x) ** (0.5 + params.epsilon)
    if params.rho is None:
        raise DomainError("THM2 rule needs rho")
    if not 2 < params.rho < 2 * params.K + 4:
        raise ValidityError(f"THM2 Q rule needs 2 < rho < 2K+4, got rho={params.rho}, K={params.K}")
    assert params.xi >= Fraction(1, 2)
    return float(x) ** float(params.xi)


def q_threshold_exponent(params: ExponentParams) -> Fraction:
    """``(1 - 2 kappa)/(2 - 3 kappa)``: from ``Q = x^t`` with t above this, the G-type term dominates."""
    k = params.kappa
    return (1 - 2 * k) / (2 - 3 * k)


def j1_terms(x: float, Q: float, params: ExponentParams) -> tuple[float, float]:
    """The two competing bounds ``x^(1-gamma rho) Q^(gamma rho - 2)`` and ``x^(1+kappa rho/2) Q^(-2-rho/2)``.

    Returned as natural logarithms to avoid overflow.
    """
    if params.rho is None:
        raise DomainError("needs rho")
    g, k, r = float(params.gamma), float(params.kappa), float(params.rho)
    lx, lQ = math.log(x), math.log(Q)
    return (1 - g * r) * lx + (g * r - 2) * lQ, (1 + k * r / 2) * lx + (-2 - r / 2) * lQ
