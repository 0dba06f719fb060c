from __future__ import annotations

import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from smooth_moments import (
    BoundViolation,
    compare,
    cor_energy_bound,
    corollary_consistency_check,
    energy,
    exponent_params,
    harper_mvt_bound,
    sieve_smooth,
    sunit_bound,
    thm1_bound,
    thm2_bound,
    trivial_bound,
)
from smooth_moments.bounds import all_bounds, exponent_identities, thm1_nontrivial
from smooth_moments.errors import DomainError
from smooth_moments.moments import Method, MomentResult

rationals = st.fractions(min_value=Fraction(1, 10), max_value=60, max_denominator=50)


def test_trivial_examples():
    assert trivial_bound(2, 37).total == 37
    assert trivial_bound(4, 4).total == 64
    s = sieve_smooth(10, 2)
    rep = compare(trivial_bound(4, 4, 10, 2), energy(s))
    assert rep.ratio == 28 / 64
    with pytest.raises(DomainError):
        trivial_bound(1.5, 10)


def test_compare_ratios_and_errors():
    r = MomentResult(4.0, 44, Method.EXACT_CONVOLUTION, psi=4, x=4)
    assert compare(trivial_bound(4, 4, 4), r).ratio == 44 / 64
    r2 = MomentResult(2.0, 100.0, Method.GRID, 101, psi=100, x=100)
    assert compare(trivial_bound(2, 100, 100), r2).ratio == 1.0
    with pytest.raises(BoundViolation):
        compare(trivial_bound(4, 4), MomentResult(4.0, 65, Method.EXACT_CONVOLUTION, psi=4))
    with pytest.raises(DomainError):
        compare(trivial_bound(4, 5), r)
    with pytest.raises(DomainError):
        compare(trivial_bound(3, 4), r)
    p = exponent_params(5, 10)
    rep = compare(thm1_bound(100, 10, p), MomentResult(10.0, 1e30, Method.GRID, psi=10, x=100))
    assert rep.ratio > 1  # recorded, never asserted


def test_harper_examples():
    assert harper_mvt_bound(4, 500, 10**4).total == pytest.approx(6.25e6, rel=1e-12)
    assert harper_mvt_bound(4, 1000, 1000, 1000).total == pytest.approx(1000.0**3, rel=1e-12)
    r = harper_mvt_bound(4, 500, 10**4, None)
    assert not r.valid and any("conditional" in m for m in r.reasons)
    assert harper_mvt_bound(4, 10**4, 10**4, 10**4).valid


def test_sunit_examples():
    r = sunit_bound(2, 100, 10, 1.0)
    assert r.total == pytest.approx(1e4 + 100 * math.exp(10 / math.log(10)), rel=1e-12)
    assert sunit_bound(2, 100, 10, 1e-12).total == pytest.approx(1e4 + 100, rel=1e-9)
    for psi, y, C in [(100, 10, 1.0), (10**6, 50, 0.5), (50, 200, 2.0)]:
        r = sunit_bound(3, psi, y, C)
        t1, t2 = r.terms.values()
        assert (t1 >= t2) == (psi >= math.exp(C * y / math.log(y)))
    with pytest.raises(DomainError):
        sunit_bound(1, 100, 10)


def test_thm1_example():
    r = thm1_bound(100, 10, exponent_params(5, 10))
    assert list(r.terms.values()) == [1e8, 1e8, 1e13]
    assert r.valid and r.nontrivial
    assert all(not thm1_nontrivial(4, rho) for rho in (3, 10, 100, 10**6))
    assert thm1_nontrivial(7, Fraction(61, 10)) and not thm1_nontrivial(7, 6)
    assert thm1_nontrivial(5, Fraction(81, 10)) and not thm1_nontrivial(5, 8)


def test_thm2_example():
    p = exponent_params(13, 4)
    r = thm2_bound(10**4, 100, p)
    assert r.valid
    assert [b for _, b in r.shapes.values()] == [Fraction(3, 2), Fraction(35, 19)]
    assert r.total == pytest.approx(100 * (1e6 + 1e4 ** (35 / 19)), rel=1e-12)
    assert not thm2_bound(10**4, 100, exponent_params(13, 2)).valid


def test_cor_energy():
    r = cor_energy_bound(1000, exponent_params(13))
    assert r.valid and r.shapes["psi^(3-zeta)"][0] == Fraction(683, 228)
    assert not cor_energy_bound(1000, exponent_params(12)).valid
    big = exponent_params(10**9)
    assert abs(float(3 - big.zeta) - 3) < 1e-8


def test_corollary_checks():
    assert corollary_consistency_check(13).ok
    assert corollary_consistency_check(100).ok
    # kappa -> 0 limit
    p = exponent_params(10**12, 4)
    assert abs(float(2 * (1 - p.eta)) - 2) < 1e-10 and abs(float(p.zeta)) < 1e-10


@given(rationals, rationals)
@settings(max_examples=200, deadline=None)
def test_predicates_match_rederivation(K, rho):
    p = exponent_params(K, rho)
    kappa = 1 / K
    beta = (1 - 3 * kappa) / 4
    br = beta * rho
    r1 = thm1_bound(1000, 50, p)
    assert r1.valid == (br > Fraction(1, 2) and K > 3)
    assert r1.nontrivial == (K > 4 and rho * (K - 3) > 4 * (K - 1))
    r2 = thm2_bound(1000, 50, p)
    assert r2.valid == (Fraction(1, 2) < br < 1 and 2 < rho < 2 * K + 4 and K > 3)
    eta = kappa * (rho - 1) / (2 + 3 * kappa * rho)
    assert r2.nontrivial == (K > 4 and eta > kappa)
    if p.zeta is not None:
        assert cor_energy_bound(50, p).valid == (K > 12)


@given(st.fractions(min_value=Fraction(301, 100), max_value=500, max_denominator=100),
       st.fractions(min_value=Fraction(201, 100), max_value=80, max_denominator=100))
@settings(max_examples=200, deadline=None)
def test_exponent_identities_random(K, rho):
    chk = exponent_identities(exponent_params(K, rho))
    assert chk.ok, chk.failures()


def test_bounds_monotone():
    p = exponent_params(13, 4)
    for f in (lambda x, s: thm1_bound(x, s, p).total, lambda x, s: thm2_bound(x, s, p).total):
        assert f(10**4, 100) <= f(10**4, 200) <= f(10**5, 200)


def test_all_bounds_selection():
    p = exponent_params(13, 4)
    ids = [r.bound_id for r in all_bounds(10**4, 190, 4964, p)]
    assert ids == ["TRIVIAL", "HARPER_MVT", "SUNIT", "THM1", "THM2", "COR_ENERGY"]
    ids = [r.bound_id for r in all_bounds(10**4, 190, 4964, exponent_params(13, 3))]
    assert ids == ["TRIVIAL", "HARPER_MVT", "THM1", "THM2"]


def test_overflow_is_flagged():
    r = trivial_bound(400, 10**6)
    assert r.overflow and r.total == math.inf


def test_harper_hypothesis_threshold():
    # rho = 4, K_H = 1: need y >= (ln 10^4)^(3/2) = 27.95...
    assert math.log(1e4) ** 1.5 == pytest.approx(27.95, abs=0.01)
    assert not harper_mvt_bound(4, 100, 10**4, 27).valid
    assert harper_mvt_bound(4, 100, 10**4, 28).valid
    assert not harper_mvt_bound(4, 100, 10**4, 28, harper_K=2.0).valid
