"""End-to-end acceptance checks.  Each test prints one PASS/FAIL line."""

import random
from fractions import Fraction

import gmpy2
import pytest

from conftest import frac
from hemiring import get_structure
from hemiring.laws import check_hemiring_laws
from hemiring.norms import (
    build_finite_dim_pseudonorm,
    find_submultiplicativity_violation,
    l1_norm,
    random_structure_constants,
)
from hemiring.sequences import (
    Componentwise,
    ConstantIndex,
    ConvergenceCertificate,
    FromExpression,
    Geometric,
    PartialSums,
    Scaled,
    alternating_series_terms,
    cauchy_from_convergence,
    harmonic_null_certificate,
    partial_sum,
    power_null_certificate,
    product_certificate,
    sum_certificate,
    validate,
    validate_convergence,
    zero_series_certificate,
)
from hemiring.structures import density_witness_for, shrink_witness_for
from hemiring.theorems import (
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
    random_certificate_pairs,
    ratio_tail_identity_holds,
    ratio_test,
    squeeze_series,
)

mpq = gmpy2.mpq
Q = get_structure("rational")
ZX = get_structure("zx")
Z2 = get_structure("z1p:2")
DECIMAL_LADDER = [mpq(1, 10**j) for j in range(1, 7)]
X_LADDER = [ZX.parse(f"1/X^{j}") for j in range(1, 6)]


@pytest.fixture
def verdict(capsys):
    def emit(number, title, ok, detail=""):
        with capsys.disabled():
            print(f"\n[{'PASS' if ok else 'FAIL'}] criterion {number}: {title}" + (f" ({detail})" if detail else ""))
        assert ok, detail

    return emit


def test_01_law_suites(verdict):
    bad = {}
    for sid in ("rational", "z1p:2", "z1p:3", "zx", "maxtimes-qpos"):
        report = check_hemiring_laws(sid, 1000, 42)
        if not report.passed or report.samples_tested != 1000:
            bad[sid] = len(report.failures)
    verdict(1, "law suites, 1000 samples, seed 42", not bad, str(bad) if bad else "5 structures")


def _fraction_product(gamma, a, b):
    n = len(gamma)
    return [sum(a[i] * b[j] * gamma[i][j][k] for i in range(n) for j in range(n)) for k in range(n)]


def test_02_corrected_norm_is_submultiplicative(verdict):
    rng = random.Random(42)
    violations = 0
    raw_witness = None
    for _ in range(50):
        sc = random_structure_constants(rng)
        norm = build_finite_dim_pseudonorm(sc)
        gamma = [[[frac(c) for c in row] for row in plane] for plane in sc.gamma]
        n = sc.n
        M = max((abs(c) for c in (frac(x) for x in sc.entries())), default=0) or 1
        for _ in range(500):
            a = [Fraction(rng.randint(-20, 20), rng.randint(1, 6)) for _ in range(n)]
            b = [Fraction(rng.randint(-20, 20), rng.randint(1, 6)) for _ in range(n)]
            # oracle: ||v||' = n M sum |v_i| with the product from the table
            na, nb = n * M * sum(map(abs, a)), n * M * sum(map(abs, b))
            nab = n * M * sum(map(abs, _fraction_product(gamma, a, b)))
            assert frac(norm(tuple(mpq(x.numerator, x.denominator) for x in a))) == na
            if nab > na * nb:
                violations += 1
        if raw_witness is None and find_submultiplicativity_violation(sc) is not None:
            raw_witness = sc
    ok = violations == 0 and raw_witness is not None
    verdict(2, "corrected norm submultiplicative on 50 tables x 500 pairs", ok, f"violations={violations}, raw counterexample found={raw_witness is not None}")


def test_03_witnesses(verdict):
    rng = random.Random(42)
    checked, bad = [], []
    for sid in ("rational", "z1p:2", "z1p:3", "zx", "maxtimes-qpos"):
        S = get_structure(sid)
        if S.capabilities.dense:
            w = density_witness_for(S)
            for _ in range(200):
                eps = S.sample(rng, positive=True)
                b, g = w(eps)
                if not (S.is_positive(b) and S.is_positive(g) and S.lt(S.add(b, g), eps)):
                    bad.append((sid, "density", S.render(eps)))
            checked.append(f"{sid}:density")
        if S.capabilities.shrinkable:
            w = shrink_witness_for(S)
            for _ in range(200):
                alpha, m = S.sample(rng, positive=True), S.sample(rng, positive=True)
                al, ar = w(alpha, m)
                if not (S.is_positive(al) and S.is_positive(ar) and S.lt(S.mul(al, m), alpha) and S.lt(S.mul(m, ar), alpha)):
                    bad.append((sid, "shrink", S.render(alpha), S.render(m)))
            checked.append(f"{sid}:shrink")
    verdict(3, "density and shrink witnesses strict on 200 inputs each", not bad, f"{len(checked)} witness families" if not bad else str(bad[:3]))


def test_04_geometric_series(verdict):
    res = geometric_sum("1/2", "rational")
    s20 = partial_sum(Geometric(mpq(1, 2), Q), 19)
    ok_q = res.sum == 2 and frac(2 - s20) == Fraction(1, 2**19) and validate(res.certificate).passed
    zres = geometric_sum("1/X", "zx")
    ok_zx = zres.sum == ZX.parse("X/(X-1)") and validate(zres.certificate, X_LADDER, 64).passed
    ok_id = all(geometric_identity_holds(mpq(1, 2), Q, n) and geometric_identity_holds(ZX.parse("1/X"), ZX, n) for n in range(65))
    # independent oracle for the rational partial sum
    ok_oracle = sum(Fraction(1, 2**k) for k in range(20)) == frac(s20)
    verdict(4, "geometric series in Q and Z(X)", ok_q and ok_zx and ok_id and ok_oracle, f"Q={ok_q}, Z(X)={ok_zx}, identity n<=64={ok_id}")


def test_05_non_archimedean_counterexample(verdict):
    x = FromExpression("(1/2)^n", ZX)
    eps = ZX.parse("1/X")
    ok = True
    for N in (1, 10, 1000, 10**6):
        report = validate_convergence(ConvergenceCertificate(x, ZX.zero, ConstantIndex(N)), [eps], 64)
        ok = ok and [v.n for v in report.violations] == list(range(N, N + 65))
    verdict(5, "(1/2)^n -> 0 refuted at every probed index in Z(X)", ok)


def test_06_condensation(verdict):
    x = FromExpression("(1/2)^n", Q)
    half = cauchy_from_convergence(geometric_sum("1/2", "rational").certificate)
    source = squeeze_series(zero_series_certificate(Q), half, x, 1)
    condensed = squeeze_series(zero_series_certificate(Q, 0), half, condense(x), 0)
    results = {
        "forward": validate(condensation_forward(source), DECIMAL_LADDER, 64).passed,
        "backward": validate(condensation_backward(condensed), DECIMAL_LADDER, 64).passed,
        "roundtrip": validate(condensation_roundtrip(source), DECIMAL_LADDER, 64).passed,
        "inequalities": all(condensation_upper_holds(x, n) and condensation_lower_holds(x, n) for n in range(1, 11)),
    }
    verdict(6, "condensation certificates and inequalities", all(results.values()), str(results))


def test_07_bernoulli(verdict):
    runs = [
        ("rational", "ring_all_nonneg"),
        ("rational", "ring_all_nonpos"),
        ("z1p:2", "ring_all_nonneg"),
        ("z1p:2", "ring_all_nonpos"),
        ("maxtimes-qpos", "semiring_nonneg"),
    ]
    bad = {}
    for sid, mode in runs:
        r = bernoulli_sweep(sid, mode, 1000, 42)
        if r.failures or r.precondition_failures:
            bad[(sid, mode)] = (len(r.failures), len(r.precondition_failures))
    rng = random.Random(42)
    # x >= -1 for the single-power form
    samples = [f"{rng.randint(-d, 50)}/{d}" for d in (rng.randint(1, 50) for _ in range(100))]
    equal = all(bernoulli_check("rational", [x], "single_power:1").details["equal"] for x in samples)
    verdict(7, "Bernoulli inequality sweeps and n = 1 equality", not bad and equal, str(bad) if bad else "5 sweeps")


def test_08_limits_are_a_homomorphism(verdict):
    problems = []
    for sid in ("rational", "z1p:2"):
        pairs = random_certificate_pairs(sid, 20, 42)
        report = conv_hom_probe(pairs)
        if not report.passed:
            problems.append((sid, report.failures[:2]))
        S = get_structure(sid)
        for cx, cy in pairs:
            p, s = product_certificate(cx, cy), sum_certificate(cx, cy)
            if p.limit != S.mul(cx.limit, cy.limit) or s.limit != S.add(cx.limit, cy.limit):
                problems.append((sid, "limit mismatch"))
            if not (validate(p).passed and validate(s).passed):
                problems.append((sid, "validation"))
    kernel = conv_hom_probe([(affine_geometric_certificate("0", "1", "1/2", Q), affine_geometric_certificate("5", "-1", "1/3", Q))])
    ok = not problems and kernel.passed and "kernel_absorbs" in kernel.laws
    verdict(8, "product and sum certificates over 20 pairs in Q and Z[1/2]", ok, str(problems[:2]) if problems else "40 pairs")


def test_09_ratio_test(verdict):
    half = mpq(1, 2)
    x = Componentwise((Geometric(half, Q), Scaled(half, Geometric(half, Q))))
    cert = ratio_test(x, "3/2", half, norm=l1_norm(2))
    ok_cert = validate(cert).passed
    ok_tail = all(ratio_tail_identity_holds(half, Q, m, n) for n in range(1, 65) for m in range(n))
    # oracle for one window with Fraction
    r = Fraction(1, 2)
    ok_oracle = all((1 - r) * sum(r**k for k in range(m + 1, 33)) == r ** (m + 1) - r**33 for m in range(32))
    verdict(9, "ratio test in Q^2 with the l1 norm", ok_cert and ok_tail and ok_oracle, f"certificate={ok_cert}, tail identity={ok_tail}")


def _alternating_bound(x, S, top):
    s = PartialSums(alternating_series_terms(x))
    values = [s.term(n) for n in range(1, top + 1)]
    return all(
        S.le(S.abs(S.sub(values[n - 1], values[m - 1])), x.term(m + 1)) for m in range(1, top + 1) for n in range(m + 1, top + 1)
    )


def test_10_squeeze_and_alternating(verdict):
    half = cauchy_from_convergence(geometric_sum("1/2", "rational").certificate)
    zx_upper = cauchy_from_convergence(geometric_sum("1/X", "zx").certificate)
    checks = {
        "squeeze Q": validate(squeeze_series(zero_series_certificate(Q), half, FromExpression("(1/3)^n", Q), 1)).passed,
        "squeeze Z(X)": validate(
            squeeze_series(zero_series_certificate(ZX), zx_upper, FromExpression("(1/X^2)^n", ZX), 1), X_LADDER
        ).passed,
        "alternating Q": validate(alternating_cauchy(FromExpression("1/n", Q), harmonic_null_certificate(Q))).passed,
        "alternating Z(X)": validate(
            alternating_cauchy(FromExpression("(1/X)^n", ZX), power_null_certificate(ZX.parse("1/X"), ZX)), X_LADDER
        ).passed,
        "bound Q": _alternating_bound(FromExpression("1/n", Q), Q, 128),
        "bound Z(X)": _alternating_bound(FromExpression("(1/X)^n", ZX), ZX, 128),
    }
    verdict(10, "squeeze and alternating series", all(checks.values()), ", ".join(k for k, v in checks.items() if not v) or "all checks")
