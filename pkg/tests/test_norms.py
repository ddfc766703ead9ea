import json
import random
from fractions import Fraction

import gmpy2
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import frac
from hemiring import get_structure
from hemiring.errors import EmptyAlgebra, NotTotallyOrdered
from hemiring.maxtimes import BOTTOM, MaxTimes
from hemiring.norms import (
    StructureConstants,
    abs_norm,
    build_finite_dim_pseudonorm,
    check_metric,
    check_pseudonorm_laws,
    find_submultiplicativity_violation,
    l1_norm,
    padic_valuation_norm,
    random_structure_constants,
    raw_sum_norm,
)

mpq = gmpy2.mpq
Q = get_structure("rational")
ZX = get_structure("zx")

COMPLEX = [[[1, 0], [0, 1]], [[0, 1], [-1, 0]]]


def _valuation(q: Fraction, p):
    v = 0
    a, b = q.numerator, q.denominator
    while a % p == 0:
        a //= p
        v += 1
    while b % p == 0:
        b //= p
        v -= 1
    return v


def test_abs_examples():
    assert abs_norm(Q)(mpq(-3, 4)) == mpq(3, 4)
    assert abs_norm(ZX)(ZX.parse("1-X")) == ZX.parse("X-1")
    assert abs_norm(Q)(Q.zero) == 0


def test_abs_needs_total_order():
    with pytest.raises(NotTotallyOrdered):
        abs_norm(get_structure("qvec:2"))


def test_padic_examples():
    v2, v3 = padic_valuation_norm(2), padic_valuation_norm(3)
    assert v2(mpq(12)) == MaxTimes(mpq(1, 4))
    assert v2(mpq(0)) == BOTTOM
    assert v3(mpq(5, 9)) == MaxTimes(9)


@given(st.integers(-10**9, 10**9).filter(bool), st.integers(1, 10**9), st.sampled_from([2, 3, 5, 7]))
def test_padic_matches_valuation_oracle(a, b, p):
    q = Fraction(a, b)
    got = padic_valuation_norm(p)(mpq(a, b))
    assert frac(got.value) == Fraction(p) ** (-_valuation(q, p))


@given(st.integers(-10**6, 10**6).filter(bool), st.integers(1, 10**6), st.integers(-10**6, 10**6).filter(bool), st.integers(1, 10**6))
def test_padic_strong_triangle_is_sharp(a, b, c, d):
    v = padic_valuation_norm(3)
    r, s = mpq(a, b), mpq(c, d)
    if v(r) != v(s):
        assert v(r + s) == v(r) + v(s)  # semiring + is max


def test_complex_numbers_example():
    sc = StructureConstants.build(COMPLEX)
    norm = build_finite_dim_pseudonorm(sc)
    A = norm.source
    a, b = (mpq(1), mpq(1)), (mpq(1), mpq(-1))
    assert norm.params["M"] == 1 and norm.params["nM"] == 2
    assert norm(a) == norm(b) == 4
    ab = A.mul(a, b)
    assert ab == (mpq(2), mpq(0))
    assert norm(ab) == 4 <= norm(a) * norm(b)
    assert norm(A.zero) == 0


def test_raw_norm_fails_where_corrected_norm_holds():
    sc = StructureConstants.build([[[1, 0], [0, 1]], [[0, 1], [5, 0]]])
    raw = raw_sum_norm(sc)
    j = (mpq(0), mpq(1))
    assert raw(raw.source.mul(j, j)) == 5 > raw(j) * raw(j)
    built = build_finite_dim_pseudonorm(sc)
    assert built(built.source.mul(j, j)) <= built(j) * built(j)
    assert find_submultiplicativity_violation(sc) is not None


def test_zero_multiplication_algebra():
    sc = StructureConstants.build([[[0, 0], [0, 0]], [[0, 0], [0, 0]]])
    norm = build_finite_dim_pseudonorm(sc)
    assert norm.params["zero_m"] and norm.params["M"] == 1
    assert norm((mpq(1), mpq(-2))) == 6
    assert check_pseudonorm_laws(norm, 200, 1).passed


def test_empty_algebra():
    with pytest.raises(EmptyAlgebra):
        StructureConstants.build([])
    with pytest.raises(EmptyAlgebra):
        StructureConstants.from_json({"n": 0, "gamma": []})


def test_structure_constant_json_round_trip(tmp_path):
    sc = StructureConstants.build([[[1, 0], [0, 1]], [[0, 1], [mpq(-1, 2), 0]]])
    path = tmp_path / "sc.json"
    path.write_text(json.dumps(sc.to_json()))
    back = StructureConstants.load(path)
    assert back.gamma == sc.gamma and back.n == 2


@pytest.mark.parametrize(
    "make",
    [
        lambda: abs_norm(Q),
        lambda: abs_norm(ZX),
        lambda: padic_valuation_norm(2),
        lambda: l1_norm(3),
        lambda: build_finite_dim_pseudonorm(StructureConstants.build(COMPLEX)),
        lambda: build_finite_dim_pseudonorm(StructureConstants.build(COMPLEX), padic_valuation_norm(2)),
    ],
)
def test_pseudonorm_laws(make):
    report = check_pseudonorm_laws(make(), 300, 42)
    assert report.passed, report.failures[:3]


def test_abs_norm_product_is_exact_equality():
    report = check_pseudonorm_laws(abs_norm(Q), 1000, 42)
    assert "product_equal" in report.laws and report.passed
    assert "ultrametric" in check_pseudonorm_laws(padic_valuation_norm(2), 50, 1).laws


def test_raw_norm_law_check_finds_violation():
    sc = StructureConstants.build([[[0, 0], [0, 3]], [[0, 3], [3, 0]]])
    report = check_pseudonorm_laws(raw_sum_norm(sc), 500, 3)
    assert not report.passed
    assert {f.law for f in report.failures} == {"submultiplicative"}


def test_random_tables_respect_bounds():
    rng = random.Random(1)
    for _ in range(20):
        sc = random_structure_constants(rng)
        assert 1 <= sc.n <= 4
        assert all(abs(c) <= 10 for c in sc.entries())


def test_metric_from_abs():
    assert check_metric(abs_norm(Q), 300, 2).passed
    assert check_metric(abs_norm(ZX), 200, 2).passed
