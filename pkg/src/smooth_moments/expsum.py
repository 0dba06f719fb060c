"""Exponential sums over smooth numbers and pointwise bound skeletons.

``S(theta) = sum_{n in S(x,y)} e(theta * n)`` with ``e(t) = exp(2 pi i t)``.

The three skeletons evaluate the shape of the Fouvry-Tenenbaum, Harper and
Baker pointwise bounds with every ``o(1)`` exponent set to zero and every
implicit constant set to one. They are reported next to ``|S|`` as ratios;
nothing here asserts an inequality between the two.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import CapacityError, DomainError, ValidityError
from .smooth_core import ExponentParams, SmoothSet

#: Largest grid accepted by ``eval_S_grid`` (complex128, so about 16 bytes per node).
MAX_GRID = 1 << 25

DEFAULT_EPSILON = 0.05

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class ExpSumValue:
    theta: float
    re: float
    im: float

    @property
    def modulus(self) -> float:
        return math.hypot(self.re, self.im)

    def __complex__(self) -> complex:
        return complex(self.re, self.im)


def _reduce(theta: float) -> float:
    t = math.fmod(float(theta), 1.0)
    if t < 0:
        t += 1.0
    # fmod can return 1.0 - ulp for tiny negative inputs; that is still in [0, 1)
    return 0.0 if t == 1.0 else t


def eval_S(theta: float, s: SmoothSet) -> ExpSumValue:
    """Evaluate S(theta) by direct summation in ascending ``n``.

    Phases are reduced mod 1 before the trigonometric call and the real and
    imaginary parts are accumulated with ``math.fsum`` (exactly rounded).
    """
    if not math.isfinite(theta):
        raise DomainError(f"theta must be finite, got {theta}")
    t = _reduce(theta)
    n = s.members
    if t == 0.0:
        return ExpSumValue(t, float(n.size), 0.0)
    # extended precision for the product keeps the reduced phase accurate for large n
    prod = np.longdouble(t) * n.astype(np.longdouble)
    phase = (prod - np.floor(prod)).astype(np.float64)
    ang = TWO_PI * phase
    return ExpSumValue(t, math.fsum(np.cos(ang)), math.fsum(np.sin(ang)))


def grid_values(s: SmoothSet, N: int) -> np.ndarray:
    """Complex array of ``S(j/N)`` for ``j = 0..N-1``.

    The indicator of the set is folded mod ``N`` (so any ``N`` works, also
    ``N < x``) and transformed with an inverse FFT.
    """
    N = int(N)
    if N < 1:
        raise DomainError(f"grid size must be >= 1, got {N}")
    if N > MAX_GRID:
        raise CapacityError("N", N, MAX_GRID)
    folded = np.bincount(s.members % N, minlength=N).astype(np.float64)
    return np.fft.ifft(folded) * N


def eval_S_grid(s: SmoothSet, N: int) -> list[ExpSumValue]:
    """``[eval_S(j/N) for j in range(N)]`` computed with one FFT."""
    vals = grid_values(s, N)
    return [
        ExpSumValue(j / N, float(v.real), float(v.imag)) for j, v in enumerate(vals)
    ]


@dataclass(frozen=True)
class SkeletonReport:
    lemma_id: str
    theta: float
    a: int
    q: int
    x: int
    L: float
    value: float
    valid: bool
    modulus: float
    ratio: float
    out_of_theory: bool = False
    reasons: tuple[str, ...] = ()


def arc_L(theta: float, a: int, q: int, x: float) -> float:
    """``1 + x * ||theta - a/q||`` with the distance taken on the circle R/Z."""
    d = theta - a / q
    return 1.0 + x * abs(d - round(d))


def _check_aq(a: int, q: int) -> None:
    if q < 1:
        raise DomainError(f"q must be >= 1, got {q}")
    if math.gcd(a, q) != 1:
        raise DomainError(f"a/q must be reduced, got gcd({a}, {q}) = {math.gcd(a, q)}")


def _report(lemma, theta, a, q, s, L, value, valid, out_of_theory=False, reasons=()):
    mod = eval_S(theta, s).modulus
    ratio = mod / value if value > 0 else math.inf
    return SkeletonReport(
        lemma, float(theta), a, q, s.x, L, value, valid, mod, ratio, out_of_theory, tuple(reasons)
    )


def skeleton_ft(theta: float, a: int, q: int, s: SmoothSet) -> SkeletonReport:
    """Fouvry-Tenenbaum shape ``x (x^-1/4 + q^-1/2 + (q/x)^1/2) L``."""
    _check_aq(a, q)
    x = s.x
    L = arc_L(theta, a, q, x)
    value = x * (x**-0.25 + q**-0.5 + math.sqrt(q / x)) * L
    return _report("FT", theta, a, q, s, L, value, True)


def _theory_check(params: ExponentParams, strict: bool) -> tuple[bool, list[str]]:
    reasons = []
    out = not params.in_theory
    if out:
        reasons.append(f"K={params.K} <= 3: gamma={params.gamma} is outside the range where this bound is stated")
        if strict:
            raise ValidityError(reasons[-1])
    return out, reasons


def skeleton_harper(
    theta: float, a: int, q: int, s: SmoothSet, params: ExponentParams, strict: bool = False
) -> SkeletonReport:
    """Harper shape ``Psi (qL)^-gamma (ln x)^5/2``, valid iff ``qL <= 2 x^(1/2 - eps)``."""
    _check_aq(a, q)
    out, reasons = _theory_check(params, strict)
    x = s.x
    L = arc_L(theta, a, q, x)
    qL = q * L
    gamma = float(params.gamma)
    value = s.count * qL**-gamma * math.log(x) ** 2.5
    valid = qL <= 2.0 * x ** (0.5 - params.epsilon)
    if not valid:
        reasons.append(f"qL={qL:.6g} > 2x^(1/2-eps)")
    return _report("HARPER", theta, a, q, s, L, value, valid, out, reasons)


def skeleton_baker(
    theta: float, a: int, q: int, s: SmoothSet, params: ExponentParams, strict: bool = False
) -> SkeletonReport:
    """Baker shape ``Psi ((qL)^-gamma + (qL x^(kappa-1))^1/2)``; no arithmetic hypothesis."""
    _check_aq(a, q)
    out, reasons = _theory_check(params, strict)
    x = s.x
    L = arc_L(theta, a, q, x)
    qL = q * L
    gamma = float(params.gamma)
    kappa = float(params.kappa)
    value = s.count * (qL**-gamma + math.sqrt(qL * x ** (kappa - 1.0)))
    return _report("BAKER", theta, a, q, s, L, value, True, out, reasons)
