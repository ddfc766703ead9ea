from fractions import Fraction

import gmpy2
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import frac
from hemiring import get_structure
from hemiring.errors import (
    InvalidInputCertificate,
    NoNullCertificate,
    NotDecreasingOnProbe,
    NotInvertible,
    NotPositiveOnProbe,
    NotStrictlyDecreasingOnProbe,
    RatioViolatedOnProbe,
    ROne,
    SandwichViolatedOnProbe,
)
from hemiring.norms import l1_norm
from hemiring.sequences import (
    Componentwise,
    ConstantIndex,
    FromExpression,
    Geometric,
    Mapped,
    MaxOf,
    PartialSums,
    Scaled,
    alternating_series_terms,
    cauchy_from_convergence,
    harmonic_null_certificate,
    log2_shift_index,
    partial_sum,
    power_null_certificate,
    validate,
    zero_series_certificate,
)
from hemiring.theorems import (
    absolute_to_plain,
    affine_geometric_certificate,
    alternating_cauchy,
    bernoulli_check,
    bernoulli_sweep,
    condensation_backward,
    condensation_forward,
    condensation_lower_holds,
    condensation_roundtrip,
    condensation_upper_holds,
    condense,
    conv_hom_probe,
    geometric_identity_holds,
    geometric_sum,
    probed_ratio_certificate,
    random_certificate_pairs,
    ratio_tail_identity_holds,
    ratio_test,
    squeeze_series,
)

mpq = gmpy2.mpq
Q = get_structure("rational")
ZX = get_structure("zx")
Z2 = get_structure("z1p:2")
HALF = mpq(1, 2)


def zx_ladder(k=5):
    return [ZX.parse(f"1/X^{j}") for j in range(1, k + 1)]


def half_series():
    return cauchy_from_convergence(geometric_sum("1/2", "rational").certificate)


# --- geometric series -------------------------------------------------------------


def test_geometric_half():
    res = geometric_sum("1/2", "rational")
    assert res.sum == 2
    s20 = partial_sum(Geometric(HALF, Q), 19)
    assert s20 == 2 - mpq(1, 2**19)
    assert validate(res.certificate).passed
    assert set(res.prerequisites) == {"power_null_cert", "inverse_of_one_minus_r"}


def test_geometric_zx():
    res = geometric_sum("1/X", "zx")
    assert res.sum == ZX.parse("X/(X-1)")
    assert validate(res.certificate, zx_ladder(), 64).passed


def test_geometric_other_ratios():
    assert geometric_sum("-1/2", "rational").sum == mpq(2, 3)
    assert geometric_sum("3/4", "z1p:2").sum == Z2.parse("4")
    assert validate(geometric_sum("3/4", "z1p:2").certificate).passed
    zero = geometric_sum("0", "rational")
    assert zero.sum == 1 and validate(zero.certificate).passed


@pytest.mark.parametrize(
    "r,sid,error",
    [
        ("1", "rational", ROne),
        ("1/2", "zx", NoNullCertificate),
        ("4", "z1p:2", NotInvertible),
        ("-1/2", "z1p:2", NotInvertible),
        ("3", "z1p:2", NoNullCertificate),
        ("2", "rational", NoNullCertificate),
        ("-1", "rational", NoNullCertificate),
    ],
)
def test_geometric_errors(r, sid, error):
    with pytest.raises(error):
        geometric_sum(r, sid)


@given(st.integers(-30, 30), st.integers(1, 30))
@settings(max_examples=50)
def test_geometric_identity_rational(a, b):
    r = mpq(a, b)
    for n in (0, 1, 7, 64):
        assert geometric_identity_holds(r, Q, n)
    # oracle: the closed form over Fraction
    q = Fraction(a, b)
    if q != 1:
        s = sum(q**k for k in range(21))
        assert (1 - q) * s == 1 - q**21


@pytest.mark.parametrize("text", ["1/X", "X", "(X-1)/(X^2+3)", "2"])
def test_geometric_identity_zx(text):
    r = ZX.parse(text)
    assert all(geometric_identity_holds(r, ZX, n) for n in range(0, 65, 8))


def test_only_zero_can_be_a_fixed_point_limit():
    # l = lim r^n forces l (r - 1) = 0, hence l = 0 here
    for r in (HALF, mpq(-2, 3), mpq(9, 10)):
        cert = power_null_certificate(r, Q)
        assert validate(cert).passed
        assert cert.limit * (r - 1) == 0 and cert.limit == 0


# --- condensation ---------------------------------------------------------------------


def test_condense_examples():
    assert condense(FromExpression("(1/2)^n", Q)).term(3) == mpq(1, 32)
    zero = condense(FromExpression("0", Q))
    assert all(zero.term(i) == 0 for i in range(10))
    assert condense(FromExpression("(1/X)^n", ZX)).term(1) == ZX.parse("2/X^2")


def test_log2_shift_is_minimal():
    for n1 in range(0, 600):
        k = log2_shift_index(n1)
        assert 2 ** (k - 1) + 1 >= n1 or k == 0 and n1 <= 1
        if k > 1:
            assert 2 ** (k - 2) + 1 < n1


def test_forward_backward_roundtrip_rational():
    x = FromExpression("(1/2)^n", Q)
    source = squeeze_series(zero_series_certificate(Q), half_series(), x, 1)
    fw = condensation_forward(source)
    assert validate(fw).passed
    cz = squeeze_series(zero_series_certificate(Q, 0), half_series(), condense(x), 0)
    bw = condensation_backward(cz)
    assert validate(bw).passed
    assert validate(condensation_roundtrip(source)).passed


def test_backward_modulus_is_an_exponential_shift():
    x = FromExpression("(1/2)^n", Q)
    cz = probed_ratio_certificate(condense(x))
    bw = condensation_backward(cz, 64)
    for e in (mpq(1, 10), mpq(1, 1000)):
        assert bw.modulus(e) == 2 ** (cz.modulus(e) + 1)


def test_forward_on_zero_series():
    cert = condensation_forward(zero_series_certificate(Q), 32)
    assert isinstance(cert.modulus, ConstantIndex) and cert.modulus.N == 1
    assert validate(cert).passed


def test_forward_preconditions():
    with pytest.raises(NotDecreasingOnProbe):
        condensation_forward(zero_series_certificate(Q).__class__(PartialSums(FromExpression("n", Q)), ConstantIndex(1)))
    with pytest.raises(NotPositiveOnProbe):
        condensation_forward(zero_series_certificate(Q).__class__(PartialSums(FromExpression("-1/n", Q)), ConstantIndex(1)))


@pytest.mark.parametrize("text", ["(1/2)^n", "1/n", "1/n^2", "3/(n+1)"])
def test_condensation_inequalities(text):
    x = FromExpression(text, Q)
    for n in range(1, 11):
        assert condensation_upper_holds(x, n)
        assert condensation_lower_holds(x, n)


def test_condensation_inequalities_zx():
    x = FromExpression("(1/X)^n", ZX)
    for n in range(1, 8):
        assert condensation_upper_holds(x, n) and condensation_lower_holds(x, n)


def test_inequality_oracle_for_harmonic():
    # direct Fraction computation of both block inequalities for 1/n
    for n in range(1, 11):
        upper_block = sum(Fraction(1, i) for i in range(2 ** (n - 1) + 1, 2**n + 1))
        lower_block = sum(Fraction(1, i) for i in range(2**n, 2 ** (n + 1)))
        assert 1 <= 2 * upper_block  # 2^n * (1/2^n) = 1
        assert lower_block <= 1


@pytest.mark.parametrize("sid,text", [("rational", "(1/2)^n"), ("rational", "(2/3)^n"), ("z1p:2", "(1/2)^n"), ("z1p:3", "(2/3)^n")])
def test_cli_style_condensation(sid, text):
    S = get_structure(sid)
    x = FromExpression(text, S)
    for cert in (
        condensation_forward(probed_ratio_certificate(x), 64),
        condensation_backward(probed_ratio_certificate(condense(x)), 64),
        condensation_roundtrip(probed_ratio_certificate(x), 64),
    ):
        assert validate(cert).passed


# --- squeeze --------------------------------------------------------------------------


def test_squeeze_rational():
    y = FromExpression("(1/3)^n", Q)
    cert = squeeze_series(zero_series_certificate(Q), half_series(), y, 1)
    assert validate(cert).passed


def test_squeeze_zx():
    z = probed_ratio_certificate(FromExpression("(1/X)^n", ZX))
    y = FromExpression("(1/X^2)^n", ZX)
    cert = squeeze_series(zero_series_certificate(ZX), z, y, 1)
    assert validate(cert, zx_ladder(), 64).passed


def test_squeeze_identical_inputs():
    c = half_series()
    x = c.sequence.of
    cert = squeeze_series(c, c, x, 1)
    assert isinstance(cert.modulus, MaxOf)
    for e in (mpq(1, 10), mpq(1, 10**4)):
        assert cert.modulus(e) == max(1, c.modulus(e))


def test_squeeze_violation():
    with pytest.raises(SandwichViolatedOnProbe):
        squeeze_series(zero_series_certificate(Q), half_series(), FromExpression("1", Q), 1)


# --- alternating series -------------------------------------------------------------------


def _alternating_bound_holds(x, S, top):
    s = PartialSums(alternating_series_terms(x))
    values = [s.term(n) for n in range(1, top + 1)]
    for m in range(1, top + 1):
        for n in range(m + 1, top + 1):
            if not S.le(S.abs(S.sub(values[n - 1], values[m - 1])), x.term(m + 1)):
                return False
    return True


def test_alternating_harmonic():
    x = FromExpression("1/n", Q)
    cert = alternating_cauchy(x, harmonic_null_certificate(Q))
    assert validate(cert).passed
    assert _alternating_bound_holds(x, Q, 128)


def test_alternating_harmonic_against_fraction_oracle():
    s = PartialSums(alternating_series_terms(FromExpression("1/n", Q)))
    expected = Fraction(0)
    for n in range(1, 30):
        expected += Fraction((-1) ** (n + 1), n)
        assert frac(s.term(n)) == expected


def test_alternating_geometric():
    x = FromExpression("(1/2)^n", Q)
    assert validate(alternating_cauchy(x, power_null_certificate(HALF, Q))).passed
    assert _alternating_bound_holds(x, Q, 128)
    xz = FromExpression("(1/X)^n", ZX)
    assert validate(alternating_cauchy(xz, power_null_certificate(ZX.parse("1/X"), ZX)), zx_ladder()).passed
    assert _alternating_bound_holds(xz, ZX, 40)


def test_alternating_rejects_constant():
    with pytest.raises(NotStrictlyDecreasingOnProbe):
        alternating_cauchy(FromExpression("1", Q), harmonic_null_certificate(Q))


# --- absolute convergence --------------------------------------------------------------------


def test_absolute_to_plain_rational():
    x = FromExpression("(-1)^n*(1/2)^n", Q)
    cert = absolute_to_plain(half_series(), x)
    assert validate(cert).passed


def test_absolute_to_plain_vectors():
    y = Componentwise((FromExpression("(1/2)^n", Q), Scaled(mpq(-1), FromExpression("(1/3)^n", Q))))
    norm = l1_norm(2)
    abs_cert = ratio_test(Mapped(norm, y), "5/6", "1/2")
    cert = absolute_to_plain(abs_cert, y, norm)
    assert validate(cert).passed


def test_absolute_to_plain_zero():
    cert = absolute_to_plain(zero_series_certificate(Q), FromExpression("0", Q))
    assert validate(cert).passed


def test_absolute_to_plain_rejects_mismatch():
    with pytest.raises(InvalidInputCertificate):
        absolute_to_plain(half_series(), FromExpression("(1/3)^n", Q))


# --- ratio test -------------------------------------------------------------------------------


def vector_example():
    return Componentwise((Geometric(HALF, Q), Scaled(HALF, Geometric(HALF, Q))))


def test_ratio_test_on_q2():
    x = vector_example()
    cert = ratio_test(x, "3/2", "1/2", norm=l1_norm(2))
    assert validate(cert).passed
    # componentwise closed forms: sums (2, 1), tail after n terms is (2^-n, 2^-n-1)
    for n in (5, 20, 60):
        s = partial_sum(x, n)
        assert (2 - s[0], 1 - s[1]) == (mpq(1, 2**n), mpq(1, 2 ** (n + 1)))


def test_ratio_tail_identity():
    for n in range(1, 65):
        for m in range(n):
            assert ratio_tail_identity_holds(HALF, Q, m, n)


def test_ratio_test_trivial_and_failing():
    zero = Scaled(Q.zero, Geometric(HALF, Q))
    cert = ratio_test(zero, "0", "1/2")
    assert isinstance(cert.modulus, ConstantIndex) and validate(cert).passed
    with pytest.raises(NoNullCertificate):
        ratio_test(Geometric(mpq(2), Q), "1", "2")
    with pytest.raises(RatioViolatedOnProbe):
        ratio_test(FromExpression("1/n", Q), "1", "1/2")


def test_probed_ratio_skips_a_bad_prefix():
    # ratios 1, 1/2, 1/2, ... for the condensed series of (1/2)^n
    c = condense(FromExpression("(1/2)^n", Q))
    cert = probed_ratio_certificate(c)
    assert validate(cert).passed
    with pytest.raises(NoNullCertificate):
        probed_ratio_certificate(FromExpression("2^n", Q))
    # ratios of 1/n^2 stay below 1 on any finite window, so the bound is only a tail assumption
    slow = probed_ratio_certificate(FromExpression("1/n^2", Q))
    assert slow.metadata["assumptions"]


# --- Bernoulli --------------------------------------------------------------------------------


def test_bernoulli_examples():
    r = bernoulli_check("rational", ["1", "1", "1"], "ring_all_nonneg")
    assert r.passed and r.details["lhs"] == "8" and r.details["rhs"] == "4"
    r = bernoulli_check("rational", ["7/3"], "single_power:1")
    assert r.details["equal"]
    r = bernoulli_check("rational", ["-1/2", "-1/3"], "ring_all_nonpos")
    assert r.passed and r.details["lhs"] == "1/3" and r.details["rhs"] == "1/6"


def test_bernoulli_preconditions_are_not_failures():
    r = bernoulli_check("rational", ["1", "-1/2"], "ring_all_nonneg")
    assert r.passed and r.precondition_failures
    r = bernoulli_check("rational", ["-3"], "ring_all_nonpos")
    assert r.precondition_failures


def test_bernoulli_maxtimes_is_max_versus_product():
    MT = get_structure("maxtimes-qpos")
    xs = ["3", "1/2", "5/4"]
    r = bernoulli_check(MT, xs, "semiring_nonneg")
    # prod max(1, x_i) = 3 * 1 * 5/4 against max(1, 3, 1/2, 5/4) = 3
    assert r.details["lhs"] == "15/4" and r.details["rhs"] == "3" and r.passed


@pytest.mark.parametrize(
    "sid,mode",
    [
        ("rational", "ring_all_nonneg"),
        ("rational", "ring_all_nonpos"),
        ("z1p:2", "ring_all_nonneg"),
        ("z1p:2", "ring_all_nonpos"),
        ("maxtimes-qpos", "semiring_nonneg"),
        ("zx", "ring_all_nonneg"),
        ("rational", "single_power:7"),
    ],
)
def test_bernoulli_sweeps(sid, mode):
    r = bernoulli_sweep(sid, mode, 300, 42)
    assert r.passed and not r.precondition_failures


@given(st.builds(Fraction, st.integers(-10**3, 10**3), st.integers(1, 10**3)), st.integers(0, 64))
def test_single_power_matches_fraction_oracle(x, n):
    if x < -1:
        return
    assert (1 + x) ** n >= 1 + n * x
    r = bernoulli_check("rational", [f"{x.numerator}/{x.denominator}"], f"single_power:{n}")
    assert r.passed and not r.precondition_failures


# --- limits as a homomorphism ----------------------------------------------------------------


def test_conv_hom_probe_rational():
    r = conv_hom_probe(random_certificate_pairs("rational", 6, 1))
    assert r.passed, r.failures


def test_conv_hom_probe_z1p():
    r = conv_hom_probe(random_certificate_pairs("z1p:2", 4, 2))
    assert r.passed, r.failures


def test_kernel_absorbs():
    x = affine_geometric_certificate("0", "1", "1/2", Q)
    y = affine_geometric_certificate("5", "-1", "1/3", Q)
    r = conv_hom_probe([(x, y)])
    assert r.passed and "kernel_absorbs" in r.laws


def test_invalid_input_certificate():
    bogus = affine_geometric_certificate("1", "1", "1/2", Q)
    bogus = type(bogus)(bogus.sequence, mpq(7), bogus.modulus)
    with pytest.raises(InvalidInputCertificate):
        conv_hom_probe([(bogus, bogus)])
