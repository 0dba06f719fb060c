"""Exact integer convolution by number-theoretic transforms.

Three NTT-friendly primes below 2**30 are used so every butterfly product
fits in int64; the residues are recombined with Garner's mixed-radix CRT.
Inputs must be non-negative; a convolution whose coefficients could reach
``2**63`` (judged by ``max(a) * max(b) * min(len(a), len(b))``) is refused.
"""

from __future__ import annotations

import numpy as np

from .errors import CapacityError

# (prime, primitive root, largest power-of-two transform length)
_PRIMES = (
    (998244353, 3, 1 << 23),
    (469762049, 3, 1 << 26),
    (167772161, 3, 1 << 25),
)

MAX_NTT_LENGTH = min(m for _, _, m in _PRIMES)

# below this many multiply-adds the direct method wins
_DIRECT_LIMIT = 1 << 22


def _root_powers(root: int, half: int, p: int) -> np.ndarray:
    w = np.ones(1, dtype=np.int64)
    step = root
    while w.size < half:
        w = np.concatenate([w, w * step % p])
        step = step * step % p
    return w[:half]


def _bit_reverse(n: int) -> np.ndarray:
    bits = n.bit_length() - 1
    idx = np.arange(n, dtype=np.int64)
    rev = np.zeros(n, dtype=np.int64)
    for b in range(bits):
        rev |= ((idx >> b) & 1) << (bits - 1 - b)
    return rev


def ntt(a: np.ndarray, p: int, g: int, inverse: bool = False) -> np.ndarray:
    """Iterative radix-2 transform of ``a`` (length a power of two) modulo ``p``."""
    n = a.size
    A = (a % p)[_bit_reverse(n)].astype(np.int64)
    root = pow(g, (p - 1) // n, p)
    if inverse:
        root = pow(root, p - 2, p)
    w_all = _root_powers(root, max(n // 2, 1), p)
    length = 2
    while length <= n:
        half = length // 2
        tw = w_all[:: n // length][:half]
        B = A.reshape(-1, length)
        u = B[:, :half].copy()
        v = B[:, half:] * tw % p
        B[:, :half] = (u + v) % p
        B[:, half:] = (u - v) % p
        length *= 2
    if inverse:
        A = A * pow(n, p - 2, p) % p
    return A


def _conv_mod(a: np.ndarray, b: np.ndarray, n: int, p: int, g: int) -> np.ndarray:
    fa = ntt(np.pad(a, (0, n - a.size)), p, g)
    fb = ntt(np.pad(b, (0, n - b.size)), p, g)
    return ntt(fa * fb % p, p, g, inverse=True)


def _garner(r1, r2, r3) -> np.ndarray:
    (p1, _, _), (p2, _, _), (p3, _, _) = _PRIMES
    inv_p1_p2 = pow(p1, -1, p2)
    inv_p1_p3 = pow(p1, -1, p3)
    inv_p2_p3 = pow(p2, -1, p3)
    t2 = (r2 - r1) % p2 * inv_p1_p2 % p2
    t3 = ((r3 - r1) % p3 * inv_p1_p3 % p3 - t2) % p3 * inv_p2_p3 % p3
    return r1 + p1 * t2 + (p1 * p2) * t3


def convolve_exact(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Exact linear convolution of two non-negative int64 vectors.

    Small inputs go through ``np.convolve``; large ones through a
    three-prime NTT. Raises ``CapacityError`` if an output coefficient
    could reach ``2**63``.
    """
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    if a.size == 0 or b.size == 0:
        raise ValueError("cannot convolve an empty vector")
    if a.min() < 0 or b.min() < 0:
        raise ValueError("convolve_exact needs non-negative inputs")
    worst = int(a.max()) * int(b.max()) * min(a.size, b.size)
    if worst >= 1 << 63:
        raise CapacityError("coefficient bound", worst, (1 << 63) - 1)
    out_len = a.size + b.size - 1
    if a.size * b.size <= _DIRECT_LIMIT:
        return np.convolve(a, b)
    n = 1 << (out_len - 1).bit_length()
    if n > MAX_NTT_LENGTH:
        raise CapacityError("convolution length", out_len, MAX_NTT_LENGTH)
    residues = [_conv_mod(a, b, n, p, g)[:out_len] for p, g, _ in _PRIMES]
    return _garner(*residues)
