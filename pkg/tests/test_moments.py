from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from oracles import quadruple_count, riemann_moment, tuple_moment
from smooth_moments import SmoothSet, energy, even_moment_exact, moment_quadrature, moment_refined, sieve_smooth
from smooth_moments.errors import CapacityError, ConvergenceError, DomainError
from smooth_moments.moments import Method, alias_free_size, even_integer, representation_counts


def _set(members, y=None):
    m = np.asarray(sorted(members), dtype=np.int64)
    m.flags.writeable = False
    return SmoothSet(int(m.max()), y if y is not None else int(m.max()), m)


ONE_TO_FOUR = _set(range(1, 5))
SIDON = sieve_smooth(10, 2)


def test_rep_counts_sidon():
    rc = representation_counts(SIDON, 2)
    expect = {2: 1, 3: 2, 4: 1, 5: 2, 6: 2, 8: 1, 9: 2, 10: 2, 12: 2, 16: 1}
    assert {m: rc.r(m) for m in range(0, 21) if rc.r(m)} == expect
    assert rc.total == 16 and int(rc.counts.sum()) == 16


def test_rep_counts_interval():
    rc = representation_counts(ONE_TO_FOUR, 2)
    assert [rc.r(m) for m in range(2, 9)] == [m - 1 if m <= 5 else 9 - m for m in range(2, 9)]
    assert rc.total == 16


def test_rep_counts_s1_is_indicator():
    s = sieve_smooth(300, 7)
    rc = representation_counts(s, 1)
    assert np.array_equal(rc.counts, s.indicator()) and rc.total == s.count


@pytest.mark.parametrize("s", [2, 3])
def test_rep_counts_total(s):
    st_ = sieve_smooth(2000, 13)
    rc = representation_counts(st_, s)
    assert rc.total == st_.count**s == sum(map(int, rc.counts.tolist()))
    assert rc.counts.min() >= 0


def test_exact_small_cases():
    assert even_moment_exact(ONE_TO_FOUR, 2).value == 44
    assert energy(SIDON).value == 28 == 2 * 4**2 - 4
    assert energy(_set([1])).value == 1
    assert energy(_set(range(1, 11))).value == 670
    r = even_moment_exact(SIDON, 1)
    assert r.value == 4 and r.method is Method.EXACT_CONVOLUTION and r.N == 0
    assert isinstance(energy(SIDON).value, int)


def test_energy_against_quadruple_oracle():
    for x, y in [(300, 3), (300, 7), (250, 300), (200, 11)]:
        s = sieve_smooth(x, y)
        assert energy(s).value == quadruple_count(s.members.tolist())


def test_six_moment_against_tuple_oracle():
    s = sieve_smooth(60, 5)
    assert even_moment_exact(s, 3).value == tuple_moment(s.members.tolist(), 3)


def test_energy_non_sidon_exceeds_floor():
    s = ONE_TO_FOUR
    assert energy(s).value > 2 * s.count**2 - s.count


def test_large_power_uses_python_ints():
    s = sieve_smooth(3000, 3000)
    v = even_moment_exact(s, 3).value
    assert isinstance(v, int) and v >= s.count**3


def test_quadrature_examples():
    assert moment_quadrature(ONE_TO_FOUR, 4, 7).value == pytest.approx(44, rel=1e-9)
    aliased = moment_quadrature(ONE_TO_FOUR, 4, 4).value
    assert abs(aliased - 44) > 1
    s = sieve_smooth(1000, 17)
    assert moment_quadrature(s, 2, s.x + 1).value == pytest.approx(s.count, rel=1e-9)


def test_quadrature_matches_direct_riemann_sum():
    s = sieve_smooth(120, 5)
    for rho, N in [(3.0, 97), (2.5, 64), (4.0, 50)]:
        got = moment_quadrature(s, rho, N).value
        assert got == pytest.approx(riemann_moment(s.members.tolist(), rho, N), rel=1e-10)


def test_quadrature_error_estimate():
    s = sieve_smooth(200, 7)
    assert moment_quadrature(s, 4, alias_free_size(200, 2)).error_estimate == 0.0
    assert moment_quadrature(s, 3, 400).error_estimate > 0
    assert moment_quadrature(s, 3, 401).error_estimate == float("inf")


def test_quadrature_rejects():
    with pytest.raises(DomainError):
        moment_quadrature(SIDON, 0, 10)


def test_refined_even_matches_exact():
    s = sieve_smooth(400, 13)
    r = moment_refined(s, 4, 1e-9)
    assert r.method is Method.GRID_REFINED
    assert r.value == pytest.approx(energy(s).value, rel=1e-9)
    assert r.N == 4 * s.x


def test_refined_odd_against_fine_grid():
    r = moment_refined(ONE_TO_FOUR, 3, 1e-8)
    ref = moment_quadrature(ONE_TO_FOUR, 3, 16 * r.N).value
    assert abs(r.value - ref) <= 1e-8 * ref
    assert r.error_estimate < 1e-8


def test_refined_rho2_is_psi():
    s = sieve_smooth(500, 5)
    assert moment_refined(s, 2, 0.5).value == pytest.approx(s.count, rel=1e-12)


def test_refined_cap():
    with pytest.raises(ConvergenceError) as e:
        moment_refined(sieve_smooth(500, 5), 3, 1e-15, max_N=2048)
    assert e.value.N <= 2048 < 2 * e.value.N
    with pytest.raises(CapacityError):
        moment_refined(sieve_smooth(500, 5), 3, 1e-6, max_N=100)
    with pytest.raises(DomainError):
        moment_refined(SIDON, 3, 0)


def test_even_integer():
    assert even_integer(4) == 2 and even_integer(4.0) == 2 and even_integer(3) is None
    assert even_integer(2.5) is None and alias_free_size(4, 2) == 7


def test_capacity():
    s = sieve_smooth(10**6, 10**6)
    with pytest.raises(CapacityError):
        representation_counts(s, 10)


@given(st.sets(st.integers(1, 120), min_size=1, max_size=25))
@settings(max_examples=60, deadline=None)
def test_moment_properties(members):
    s = _set(members)
    psi = s.count
    assert even_moment_exact(s, 1).value == psi
    e = energy(s).value
    assert e == quadruple_count(members)
    assert psi**2 <= e <= psi**3
    assert e >= 2 * psi**2 - psi
    q = moment_quadrature(s, 4, alias_free_size(s.x, 2)).value
    assert q == pytest.approx(e, rel=1e-9)
    assert moment_quadrature(s, 3, 64).value <= psi**2 * (1 + 1e-9)
