from __future__ import annotations

import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from oracles import circ_dist
from smooth_moments import SmoothSet, arc_decompose, classify_theta, exponent_params, farey_fractions, sieve_smooth
from smooth_moments.arcs import (
    MAX_FAREY_Q,
    Split,
    classify_grid,
    j1_terms,
    optimal_Q,
    q_threshold_exponent,
)
from smooth_moments.errors import CapacityError, DomainError, ValidityError


def _totient_sum(n):
    return sum(1 for q in range(1, n + 1) for a in range(1, q + 1) if math.gcd(a, q) == 1)


def _brute_label(theta, Q):
    """Smallest q <= Q with ||q theta|| < 1/Q, by scanning every q."""
    for q in range(1, math.floor(Q) + 1):
        if circ_dist(q * theta) < 1 / Q:
            return q
    return None


def test_farey_examples():
    assert farey_fractions(1) == [(1, 1)]
    assert farey_fractions(3) == [(1, 3), (1, 2), (2, 3), (1, 1)]
    assert len(farey_fractions(5)) == 10
    f = farey_fractions(40)
    assert len(f) == _totient_sum(40)
    vals = [Fraction(a, q) for a, q in f]
    assert vals == sorted(vals) and len(set(vals)) == len(vals)
    assert farey_fractions(3.7) == farey_fractions(3)


def test_farey_limits():
    with pytest.raises(DomainError):
        farey_fractions(0.5)
    with pytest.raises(CapacityError):
        farey_fractions(MAX_FAREY_Q + 1)


def test_classify_examples():
    lab = classify_theta(0.5, 2, 2)
    assert (lab.a, lab.q, lab.distance, lab.sharp, lab.L) == (1, 2, 0.0, True, 1.0)
    lab = classify_theta(1 / math.pi, 10, 100)
    assert (lab.a, lab.q) == (1, 3)
    assert abs(lab.distance - abs(1 / math.pi - 1 / 3)) < 1e-15
    assert lab.distance <= 1 / 30
    lab = classify_theta(0.4, 3, 100)
    assert lab.q <= 3 and abs(0.4 - lab.a / lab.q) <= 1 / (3 * lab.q)


def test_classify_label_fields():
    lab = classify_theta(0.999, 10, 1000)
    assert (lab.a, lab.q) == (1, 1)  # the point 1 = 0 on the circle
    assert lab.L == pytest.approx(1 + 1000 * 0.001)
    assert lab.center == Fraction(1, 1)
    assert lab.halfwidth * lab.q * lab.Q == pytest.approx(1.0)
    assert classify_theta(1.25, 10, 10).center == Fraction(1, 4)
    assert classify_theta(-0.25, 10, 10).center == Fraction(3, 4)
    with pytest.raises(DomainError):
        classify_theta(0.3, 0.5, 10)


@given(st.floats(0, 1, exclude_max=True), st.floats(1, 300), st.integers(1, 10**6))
@settings(max_examples=300, deadline=None)
def test_classify_is_smallest_q(theta, Q, x):
    lab = classify_theta(theta, Q, x)
    assert lab.q == _brute_label(theta, Q)
    assert math.gcd(lab.a, lab.q) == 1 and 1 <= lab.a <= lab.q
    assert circ_dist(theta - lab.a / lab.q) <= 1 / (lab.q * Q) + 1e-15
    assert lab.sharp == (lab.distance <= 1 / x + 1e-18) or abs(lab.distance - 1 / x) < 1e-15


@pytest.mark.parametrize("N,Q,x", [(997, 30.5, 500), (1024, 12, 100), (2000, 44.7, 2000), (1, 3, 5)])
def test_grid_matches_scalar(N, Q, x):
    g = classify_grid(N, Q, x)
    for j in range(N):
        lab = classify_theta(j / N, Q, x)
        assert (g["a"][j], g["q"][j]) == (lab.a, lab.q)
        if g["dist"][j] * x != N * g["q"][j]:  # exact ties differ once j/N is rounded
            assert g["sharp"][j] == lab.sharp


def test_decompose_examples():
    s = SmoothSet(4, 4, np.arange(1, 5, dtype=np.int64))
    p = exponent_params(13, 4)
    d = arc_decompose(s, 4, 2, 17, p, "THM2")
    assert d.split_q == 2.0
    assert d.part1 + d.part2 == pytest.approx(44, rel=1e-9)
    assert math.fsum(c for _, _, c in d.per_arc) == pytest.approx(d.total, rel=1e-12)
    assert all(c >= 0 for _, _, c in d.per_arc)
    assert d.per_arc == sorted(d.per_arc, key=lambda t: (t[1], t[0]))

    s = sieve_smooth(300, 7)
    d = arc_decompose(s, 2, 5, s.x + 1, p, Split.THM1)
    assert d.part1 + d.part2 == pytest.approx(s.count, rel=1e-9)
    assert d.sharp_part + d.flat_part == pytest.approx(d.part1, rel=1e-9)


def test_decompose_refuses_aliased_grid():
    s = sieve_smooth(100, 5)
    with pytest.raises(DomainError):
        arc_decompose(s, 4, 10, 150, exponent_params(13, 4), "THM1")


def test_optimal_Q():
    p = exponent_params(13, 4)
    assert optimal_Q(10**4, p, "THM1") == pytest.approx(10**2.2, rel=1e-12)
    assert optimal_Q(10**4, p, "thm2") == pytest.approx(1e4 ** (16 / 19), rel=1e-12)
    with pytest.raises(ValidityError):
        optimal_Q(10**4, exponent_params(13, 30), "THM2")
    with pytest.raises(ValidityError):
        optimal_Q(10**4, exponent_params(13, 2), "THM2")


def test_harper_hypothesis_on_thm1_nodes():
    x, eps = 10**4, 0.05
    Q = x ** (0.5 + eps)
    rng = np.random.default_rng(11)
    for theta in rng.random(20000).tolist():
        lab = classify_theta(theta, Q, x)
        if lab.q <= x ** (0.5 - eps):
            assert lab.q * lab.L <= 2 * x ** (0.5 - eps)


def test_thm2_part2_nodes_have_small_L():
    x = 10**4
    for Q in (x**0.5, x**0.7, x ** (16 / 19)):
        rng = np.random.default_rng(3)
        for theta in rng.random(5000).tolist():
            lab = classify_theta(theta, Q, x)
            if lab.q > x / Q:
                assert lab.L <= 2


def test_q_threshold_inequality():
    for K in (4, 5, 13, Fraction(27, 2)):
        for rho in (3, 4, 6):
            p = exponent_params(K, rho)
            t0 = float(q_threshold_exponent(p))
            for x in (1e4, 1e8, 1e20):
                for t in (t0, t0 + 0.05, 0.9, 1.0):
                    G, H = j1_terms(x, x**t, p)
                    assert G >= H - 1e-9 * abs(H)
