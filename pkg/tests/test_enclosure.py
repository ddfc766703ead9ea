from fractions import Fraction

import gmpy2
import pytest
from hypothesis import given
from hypothesis import strategies as st

from hemiring.enclosure import BIT_BUDGET, Enclosure, Inconclusive, exact_power, floor_log2

mpq = gmpy2.mpq


@given(st.integers(1, 10**30), st.integers(1, 10**30))
def test_floor_log2(a, b):
    k = floor_log2(mpq(a, b))
    q = Fraction(a, b)
    assert Fraction(2) ** k <= q < Fraction(2) ** (k + 1)


def test_small_exponents_stay_exact():
    assert exact_power(mpq(1, 2), 20) == mpq(1, 2**20)
    assert exact_power(mpq(-2, 3), 3) == mpq(-8, 27)


def test_huge_power_becomes_enclosure():
    e = exact_power(mpq(1, 2), 10**9)
    assert isinstance(e, Enclosure)
    assert e.sign == 1
    assert e < mpq(1, 10**100)
    assert e > 0
    # the radius really bounds (1/2)^k
    assert e.rad_exp <= -(10**9) + 1


@given(st.integers(2, 50), st.integers(1, 50), st.integers(1, 400))
def test_small_power_encloses_exact_value(den, num, k):
    if num >= den:
        return
    q = mpq(num, den)
    e = Enclosure.small_power(q, k)
    exact = Fraction(num, den) ** k
    assert abs(exact - Fraction(e.centre)) <= Fraction(2) ** e.rad_exp


def test_budget_switch():
    k = BIT_BUDGET + 1
    assert isinstance(exact_power(mpq(1, 2), k), Enclosure)
    assert not isinstance(exact_power(mpq(1, 2), BIT_BUDGET // 2), Enclosure)


def test_undecidable_comparison_is_inconclusive():
    a = Enclosure(0, -10)
    with pytest.raises(Inconclusive):
        a < 0
    with pytest.raises(Inconclusive):
        a == 0


def test_arithmetic_keeps_enclosing():
    a = exact_power(mpq(1, 3), 10**6)
    b = a * mpq(5) + mpq(1, 7)
    assert b > mpq(1, 8)
    assert b < mpq(1, 7) + mpq(1, 10**50)
    # the offset from 1/7 is far below the radius, so its sign is not decidable
    with pytest.raises(Inconclusive):
        b > mpq(1, 7)
    assert (-a) < 0
    assert "2^" in a.render()
