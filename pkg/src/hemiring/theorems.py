"""Certificate transformers for series: geometric sums, condensation,
squeeze, alternating and absolute convergence, the ratio test, Bernoulli's
inequality, and a probe of the limit homomorphism on convergent sequences."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Any

import gmpy2

from .errors import (
    DivisionByZero,
    InvalidInputCertificate,
    NoNullCertificate,
    NotAUnit,
    NotApplicable,
    NotDecreasingOnProbe,
    NotInvertible,
    NotPositiveOnProbe,
    NotStrictlyDecreasingOnProbe,
    PreconditionFailed,
    RatioViolatedOnProbe,
    ROne,
    SandwichViolatedOnProbe,
    WrongStructure,
)
from .laws import LawFailure, LawReport
from .norms import abs_norm, default_norm
from .parser import parse_element
from .enclosure import is_enclosure
from .sequences import (
    DEFAULT_PROBE_DEPTH,
    PRECONDITION_WINDOW,
    CauchyCertificate,
    Condensed,
    ConstantIndex,
    ConvergenceCertificate,
    DensitySplit,
    ExpShift,
    Geometric,
    Log2Shift,
    Mapped,
    MaxOf,
    Offset,
    PartialSums,
    ShrinkComposed,
    _metadata,
    constant_certificate,
    default_epsilons,
    partial_sum,
    power_null_certificate,
    product_certificate,
    scaled_certificate,
    sum_certificate,
    validate_convergence,
)
from .structures import DEFAULT_SAMPLING, resolve
from .z1p import Z1p

mpq = gmpy2.mpq


def _elem(x, S):
    return parse_element(x, S) if isinstance(x, str) else x


def _window(seq, depth):
    lo = seq.start
    return lo, lo + depth


def _series_terms(cert):
    seq = cert.sequence
    if not isinstance(seq, PartialSums):
        raise InvalidInputCertificate("expected a certificate for a series (partial sums)")
    return seq.of


# ---------------------------------------------------------------------------
# geometric series


@dataclass
class GeometricResult:
    r: Any
    sum: Any
    certificate: ConvergenceCertificate
    prerequisites: dict = field(default_factory=dict)

    @property
    def structure(self):
        return self.certificate.structure


def geometric_sum(r, structure):
    """Sum of r^n from n = 0 as (1 - r)^-1, with a convergence certificate.

    ||s_n - (1-r)^-1|| = ||r^(n+1)|| ||(1-r)^-1||, so picking eps' with
    ||(1-r)^-1|| eps' < eps and n >= N_pow(eps') is enough.
    """
    S = resolve(structure)
    r = _elem(r, S)
    if r == S.one:
        raise ROne("r = 1: the partial sums n+1 never settle")
    try:
        one_minus_r = S.sub(S.one, r)
        inv = S.inverse(one_minus_r)
    except (NotAUnit, DivisionByZero, NotApplicable) as exc:
        raise NotInvertible(f"1 - r = {S.render(S.sub(S.one, r))} is not invertible in {S.id}: {exc}") from None
    try:
        null = power_null_certificate(r, S)
    except NotApplicable as exc:
        raise NoNullCertificate(f"no certificate that r^n -> 0 for r = {S.render(r)} in {S.id}: {exc}") from None
    norm = null.norm
    seq = PartialSums(Geometric(r, S))
    if r == S.zero:
        modulus = ConstantIndex(0)
    else:
        modulus = ShrinkComposed(null.modulus, norm(inv), norm.target, "right")
    md = _metadata("geometric_sum", sum=S.render(inv))
    cert = ConvergenceCertificate(seq, inv, modulus, norm, md)
    return GeometricResult(r, inv, cert, {"power_null_cert": null, "inverse_of_one_minus_r": inv})


def geometric_identity_holds(r, structure, n):
    """(1 - r) s_n = 1 - r^(n+1) for the plain partial sum s_n."""
    S = resolve(structure)
    s = S.zero
    power = S.one
    for _ in range(n + 1):
        s = S.add(s, power)
        power = S.mul(power, r)
    return S.mul(S.sub(S.one, r), s) == S.sub(S.one, power)


# ---------------------------------------------------------------------------
# condensation


def condense(x):
    """i -> 2^i x(2^i), from i = 0."""
    return Condensed(x)


def _check_nonneg_decreasing(x, depth):
    S = x.structure
    lo, hi = _window(x, depth)
    prev = None
    for n in range(lo, hi + 1):
        v = x.term(n)
        if S.lt(v, S.zero):
            raise NotPositiveOnProbe(f"x_{n} = {S.render(v)} is negative")
        if prev is not None and S.lt(prev, v):
            raise NotDecreasingOnProbe(f"x_{n} = {S.render(v)} exceeds x_{n - 1} = {S.render(prev)}")
        prev = v
    return lo, hi


def _all_zero(x, depth):
    S = x.structure
    lo, hi = _window(x, depth)
    return all(x.term(n) == S.zero for n in range(lo, hi + 1))


def _ordered_dense(S):
    if not S.capabilities.totally_ordered:
        raise NotApplicable(f"{S.id} is not totally ordered")
    if not S.capabilities.dense:
        raise NotApplicable(f"{S.id} is not dense")


def condensation_forward(cauchy_cert, probe_depth=PRECONDITION_WINDOW):
    """Cauchy certificate for the condensed series from one for the series.

    For l >= k: sum_{i=k}^{l} 2^i x(2^i) <= 2 (s_(2^l) - s_(2^(k-1))), and
    twice a partial-sum gap below both beta and gamma is below eps.  The
    index shift is the least k with 2^(k-1) + 1 >= N1.
    """
    x = _series_terms(cauchy_cert)
    S = x.structure
    _ordered_dense(S)
    lo, hi = _check_nonneg_decreasing(x, probe_depth)
    condensed = PartialSums(Condensed(x))
    assumptions = [f"x_n >= 0 and decreasing checked for n in [{lo}, {hi}]"]
    assumptions += cauchy_cert.metadata.get("assumptions", [])
    if _all_zero(x, probe_depth):
        md = _metadata("condensation_forward", assumptions=assumptions + ["all probed terms are zero"])
        return CauchyCertificate(condensed, ConstantIndex(1), cauchy_cert.norm, md)
    H = cauchy_cert.norm.target
    N1 = DensitySplit(cauchy_cert.modulus, cauchy_cert.modulus, H)
    md = _metadata("condensation_forward", assumptions=assumptions)
    return CauchyCertificate(condensed, Log2Shift(N1), cauchy_cert.norm, md)


def condensation_backward(cauchy_cert_of_condensed, probe_depth=PRECONDITION_WINDOW):
    """Cauchy certificate for the series from one for the condensed series.

    For n > m >= 2^(N_c + 1), with 2^k <= m + 1 < 2^(k+1) and 2^(l+1) > n,
    sum_{i=m+1}^{n} x_i <= sum_{i=k}^{l} 2^i x(2^i) and k - 1 >= N_c.
    """
    cond = _series_terms(cauchy_cert_of_condensed)
    if not isinstance(cond, Condensed):
        raise InvalidInputCertificate("expected a certificate for a condensed series")
    x = cond.of
    S = x.structure
    _ordered_dense(S)
    lo, hi = _check_nonneg_decreasing(x, probe_depth)
    assumptions = [f"x_n >= 0 and decreasing checked for n in [{lo}, {hi}]"]
    assumptions += cauchy_cert_of_condensed.metadata.get("assumptions", [])
    series = PartialSums(x)
    if _all_zero(x, probe_depth):
        md = _metadata("condensation_backward", assumptions=assumptions + ["all probed terms are zero"])
        return CauchyCertificate(series, ConstantIndex(1), cauchy_cert_of_condensed.norm, md)
    modulus = ExpShift(Offset(cauchy_cert_of_condensed.modulus, 1))
    md = _metadata("condensation_backward", assumptions=assumptions)
    return CauchyCertificate(series, modulus, cauchy_cert_of_condensed.norm, md)


def condensation_roundtrip(cauchy_cert, probe_depth=PRECONDITION_WINDOW):
    return condensation_backward(condensation_forward(cauchy_cert, probe_depth), probe_depth)


def condensation_upper_holds(x, n):
    """2^n x(2^n) <= 2 * sum_{i=2^(n-1)+1}^{2^n} x_i (n >= 1)."""
    S = x.structure
    lhs = S.from_int(1 << n) * x.term(1 << n)
    block = S.zero
    for i in range((1 << (n - 1)) + 1, (1 << n) + 1):
        block = S.add(block, x.term(i))
    return S.le(lhs, S.add(block, block))


def condensation_lower_holds(x, n):
    """sum_{i=2^n}^{2^(n+1)-1} x_i <= 2^n x(2^n)."""
    S = x.structure
    block = S.zero
    for i in range(1 << n, 1 << (n + 1)):
        block = S.add(block, x.term(i))
    return S.le(block, S.from_int(1 << n) * x.term(1 << n))


# ---------------------------------------------------------------------------
# squeeze, alternating, absolute


def squeeze_series(cert_x, cert_z, y, n1=1, probe_depth=PRECONDITION_WINDOW):
    """x_n <= y_n <= z_n from n1 on, with both outer series Cauchy, makes the series of y Cauchy."""
    xs, zs = _series_terms(cert_x), _series_terms(cert_z)
    S = y.structure
    if xs.structure != S or zs.structure != S:
        raise WrongStructure("squeeze needs all three sequences in one structure")
    _ordered_dense(S)
    lo = max(n1, xs.start, y.start, zs.start)
    hi = lo + probe_depth
    for n in range(lo, hi + 1):
        a, b, c = xs.term(n), y.term(n), zs.term(n)
        if not (S.le(a, b) and S.le(b, c)):
            raise SandwichViolatedOnProbe(
                f"x_{n} <= y_{n} <= z_{n} fails: {S.render(a)}, {S.render(b)}, {S.render(c)}"
            )
    modulus = MaxOf((ConstantIndex(n1), cert_x.modulus, cert_z.modulus))
    assumptions = [f"x_n <= y_n <= z_n checked for n in [{lo}, {hi}]"]
    md = _metadata("squeeze_series", assumptions=assumptions)
    return CauchyCertificate(PartialSums(y), modulus, cert_x.norm, md)


def alternating_cauchy(x, null_cert, probe_depth=PRECONDITION_WINDOW):
    """s_n = sum (-1)^(i+1) x_i is Cauchy when x is positive, strictly decreasing and null.

    |s_n - s_m| <= x_(m+1) < eps once m >= N_x(eps) + 1.
    """
    from .sequences import alternating_series_terms

    S = x.structure
    lo, hi = _window(x, probe_depth)
    prev = None
    for n in range(lo, hi + 1):
        v = x.term(n)
        if not S.lt(S.zero, v):
            raise NotStrictlyDecreasingOnProbe(f"x_{n} = {S.render(v)} is not positive")
        if prev is not None and not S.lt(v, prev):
            raise NotStrictlyDecreasingOnProbe(f"x_{n} = {S.render(v)} is not below x_{n - 1} = {S.render(prev)}")
        prev = v
    md = _metadata(
        "alternating_cauchy",
        assumptions=[f"x_n > 0 strictly decreasing checked for n in [{lo}, {hi}]"],
    )
    seq = PartialSums(alternating_series_terms(x))
    return CauchyCertificate(seq, Offset(null_cert.modulus, 1), null_cert.norm, md)


def absolute_to_plain(abs_cauchy_cert, x, norm=None, probe_depth=PRECONDITION_WINDOW):
    """A Cauchy modulus for sum ||x_i|| also serves sum x_i."""
    norm = default_norm(x.structure) if norm is None else norm
    terms = _series_terms(abs_cauchy_cert)
    H = norm.target
    lo = max(terms.start, x.start)
    for n in range(lo, lo + probe_depth + 1):
        if terms.term(n) != norm(x.term(n)):
            raise InvalidInputCertificate(f"the absolute series does not match ||x_{n}||")
    md = _metadata(
        "absolute_to_plain",
        assumptions=abs_cauchy_cert.metadata.get("assumptions", []),
    )
    return CauchyCertificate(PartialSums(x), abs_cauchy_cert.modulus, norm, md)


def norm_series(x, norm=None):
    """The sequence ||x_n||."""
    norm = default_norm(x.structure) if norm is None else norm
    return Mapped(norm, x)


# ---------------------------------------------------------------------------
# ratio test


def ratio_test(
    x, x0_norm, r, power_null_cert=None, one_minus_r_inverse=None, norm=None, probe_depth=PRECONDITION_WINDOW, start=None
):
    """Cauchy certificate for sum x_n when ||x_(n+1)|| <= r ||x_n|| with 0 <= r < 1.

    With s = x.start (or a later ``start``) and ||x_s|| <= x0_norm the tail
    from m+1 to n is at most x0_norm r^(m+1-s) (1-r)^-1, so the modulus is
    N_pow(eps') + s - 1 for eps' shrunk against x0_norm (1-r)^-1.
    """
    norm = default_norm(x.structure) if norm is None else norm
    H = norm.target
    r = _elem(r, H)
    x0_norm = _elem(x0_norm, H)
    if r == H.one:
        raise ROne("ratio r = 1 gives no geometric majorant")
    if H.lt(r, H.zero):
        raise PreconditionFailed(f"the ratio bound must be non-negative, got {H.render(r)}")
    if one_minus_r_inverse is None:
        try:
            one_minus_r_inverse = H.inverse(H.sub(H.one, r))
        except (NotAUnit, DivisionByZero, NotApplicable) as exc:
            raise NotInvertible(f"1 - r is not invertible: {exc}") from None
    elif H.mul(H.sub(H.one, r), one_minus_r_inverse) != H.one:
        raise NotInvertible("the supplied inverse of 1 - r is wrong")
    if power_null_cert is None:
        try:
            power_null_cert = power_null_certificate(r, H)
        except NotApplicable as exc:
            raise NoNullCertificate(f"no certificate that r^n -> 0 for r = {H.render(r)}: {exc}") from None
    s = x.start if start is None else max(start, x.start)
    hi = s + probe_depth
    first = norm(x.term(s))
    if H.lt(x0_norm, first):
        raise RatioViolatedOnProbe(f"||x_{s}|| = {H.render(first)} exceeds the given {H.render(x0_norm)}")
    prev = first
    for n in range(s + 1, hi + 1):
        cur = norm(x.term(n))
        if H.lt(H.mul(r, prev), cur):
            raise RatioViolatedOnProbe(f"||x_{n}|| = {H.render(cur)} > r ||x_{n - 1}|| = {H.render(H.mul(r, prev))}")
        prev = cur
    assumptions = [f"||x_(n+1)|| <= r ||x_n|| checked for n in [{s}, {hi - 1}]"]
    md = _metadata("ratio_test", assumptions=assumptions, r=H.render(r))
    C = H.mul(x0_norm, one_minus_r_inverse)
    if C == H.zero:
        return CauchyCertificate(PartialSums(x), ConstantIndex(s), norm, md)
    modulus = ShrinkComposed(power_null_cert.modulus, C, H, "right")
    if s > 1:
        modulus = Offset(modulus, s - 1)
    return CauchyCertificate(PartialSums(x), modulus, norm, md)


def _ratio_upper(H, q):
    """An element of H at least q (q in H or, for Z[1/p], a rational)."""
    if H.carrier != "z1p":
        return q
    p = H.params["p"]
    q = mpq(q)
    for k in range(1, 128):
        m = -((-q.numerator * p**k) // q.denominator)
        if m < p**k:
            return Z1p(int(m), k, p)
    return H.one


def probed_ratio_certificate(x, depth=DEFAULT_PROBE_DEPTH, norm=None):
    """Cauchy certificate for sum x_n from the largest ratio ||x_(n+1)|| / ||x_n|| seen on a probe window.

    The window stops early at terms too large to hold exactly.  The first
    indices are skipped when that brings the ratio below 1.  The ratio
    bound is an assumption about the unprobed tail, recorded as such.
    """
    norm = default_norm(x.structure) if norm is None else norm
    H = norm.target
    lo = x.start
    values = []
    for n in range(lo, lo + depth + 1):
        v = norm(x.term(n))
        if is_enclosure(v):
            break
        values.append(v)
    if all(v == H.zero for v in values):
        if not values:
            raise NotApplicable("no exactly computable terms to probe")
        md = _metadata("probed_ratio_certificate", assumptions=[f"x_n = 0 checked for n in [{lo}, {lo + len(values) - 1}]"])
        return CauchyCertificate(PartialSums(x), ConstantIndex(lo), norm, md)
    if len(values) < 3:
        raise NotApplicable("too few exactly computable terms to estimate a ratio")
    to_q = H.to_rational if H.carrier == "z1p" else (lambda v: v)
    for skip in range(len(values) - 2):
        tail = values[skip:]
        if any(v == H.zero for v in tail[:-1]):
            continue
        ratios = [to_q(b) / to_q(a) for a, b in zip(tail, tail[1:])]
        r = ratios[0]
        for q in ratios[1:]:
            if q > r:
                r = q
        r = _ratio_upper(H, r)
        if H.lt(r, H.one):
            s = lo + skip
            return ratio_test(x, tail[0], r, norm=norm, probe_depth=len(tail) - 1, start=s)
    raise NoNullCertificate("the probed ratios ||x_(n+1)|| / ||x_n|| do not stay below 1")


def ratio_tail_identity_holds(r, structure, m, n):
    """(1 - r) sum_{k=m+1}^{n} r^k = r^(m+1) - r^(n+1)."""
    S = resolve(structure)
    total = S.zero
    for k in range(m + 1, n + 1):
        total = S.add(total, S.power(r, k))
    return S.mul(S.sub(S.one, r), total) == S.sub(S.power(r, m + 1), S.power(r, n + 1))


# ---------------------------------------------------------------------------
# Bernoulli


BERNOULLI_MODES = ("semiring_nonneg", "ring_all_nonneg", "ring_all_nonpos", "single_power")


def parse_mode(mode):
    """``single_power:<n>`` or ``single_power(<n>)`` or one of the sign modes."""
    mode = mode.strip()
    for prefix in ("single_power:", "single_power(", "single_power "):
        if mode.startswith(prefix):
            n = int(mode[len(prefix):].rstrip(")"))
            if n < 0:
                raise ValueError("the power must be non-negative")
            return "single_power", n
    if mode not in BERNOULLI_MODES or mode == "single_power":
        raise ValueError(f"unknown Bernoulli mode {mode!r}")
    return mode, None


def bernoulli_sides(S, xs, mode, power=None):
    """Both sides: prod (1 + x_i) and 1 + sum x_i, or (1+x)^n and 1 + n x."""
    one = S.one
    if mode == "single_power":
        (x,) = xs
        return S.power(S.add(one, x), power), S.add(one, S.scale(power, x))
    lhs, total = one, S.zero
    for x in xs:
        lhs = S.mul(lhs, S.add(one, x))
        total = S.add(total, x)
    return lhs, S.add(one, total)


def bernoulli_preconditions(S, xs, mode, power=None):
    """Human readable reasons the inputs fall outside the mode's hypotheses."""
    bad = []
    zero, one = S.zero, S.one
    has_neg = S.neg is not None
    if mode in ("ring_all_nonneg", "ring_all_nonpos") and not has_neg:
        bad.append(f"{S.id} is not a ring")
    if mode == "single_power" and len(xs) != 1:
        bad.append("single_power takes exactly one element")
    for i, x in enumerate(xs):
        if mode in ("semiring_nonneg", "ring_all_nonneg") and S.lt(x, zero):
            bad.append(f"x_{i + 1} = {S.render(x)} < 0")
        if mode == "ring_all_nonpos" and S.lt(zero, x):
            bad.append(f"x_{i + 1} = {S.render(x)} > 0")
        if has_neg and S.lt(S.add(one, x), zero):
            bad.append(f"1 + x_{i + 1} < 0")
    return bad


def bernoulli_check(structure, xs, mode):
    """Compare prod (1 + x_i) with 1 + sum x_i (or (1+x)^n with 1 + nx) exactly."""
    S = resolve(structure)
    mode, power = parse_mode(mode) if isinstance(mode, str) else mode
    xs = [_elem(x, S) for x in xs]
    name = f"bernoulli:{mode}" + (f":{power}" if power is not None else "")
    pre = bernoulli_preconditions(S, xs, mode, power)
    if pre:
        return LawReport(name, 1, [], None, (name,), pre, {})
    lhs, rhs = bernoulli_sides(S, xs, mode, power)
    failures = []
    if S.lt(lhs, rhs):
        failures.append(LawFailure(name, tuple(S.render(x) for x in xs), "lhs >= rhs", f"{S.render(lhs)} < {S.render(rhs)}"))
    details = {"lhs": S.render(lhs), "rhs": S.render(rhs), "equal": lhs == rhs}
    return LawReport(name, 1, failures, None, (name,), [], details)


def _bernoulli_sample(S, rng, mode, cfg):
    if S.carrier == "maxtimes" or mode in ("semiring_nonneg", "ring_all_nonneg"):
        return S.sample(rng, cfg) if S.carrier == "maxtimes" else S.abs(S.sample(rng, cfg))
    # x in [-1, 0]: build from a sample a as -|a| / (1 + |a|) in fields, -1/p^k style in Z[1/p]
    a = S.abs(S.sample(rng, cfg))
    if S.invert is not None and S.carrier != "z1p":
        return S.neg(S.div(a, S.add(S.one, a)))
    p = S.params.get("p", 2)
    k = rng.randint(0, cfg.max_exponent)
    m = rng.randint(0, p**k)
    return Z1p(-m, k, p)


def bernoulli_sweep(structure, mode, samples=1000, seed=42, max_len=6, config=DEFAULT_SAMPLING):
    """Seeded tuples satisfying the mode's preconditions; returns one combined report."""
    S = resolve(structure)
    mode, power = parse_mode(mode) if isinstance(mode, str) else mode
    rng = random.Random(seed)
    cfg = config
    failures, pre = [], []
    name = f"bernoulli:{mode}"
    for _ in range(samples):
        if mode == "single_power":
            xs = [_bernoulli_sample(S, rng, rng.choice(("ring_all_nonneg", "ring_all_nonpos")) if S.neg else mode, cfg)]
            k = power if power is not None else rng.randint(0, 12)
        else:
            xs = [_bernoulli_sample(S, rng, mode, cfg) for _ in range(rng.randint(1, max_len))]
            k = None
        bad = bernoulli_preconditions(S, xs, mode, k)
        if bad:
            pre.extend(bad)
            continue
        lhs, rhs = bernoulli_sides(S, xs, mode, k)
        if S.lt(lhs, rhs):
            failures.append(LawFailure(name, tuple(S.render(x) for x in xs), "lhs >= rhs", f"{S.render(lhs)} < {S.render(rhs)}"))
    return LawReport(name, samples, failures, seed, (name,), pre)


# ---------------------------------------------------------------------------
# limits as a ring homomorphism


def affine_geometric_certificate(c, d, r, structure):
    """Certificate for c + d r^n -> c."""
    S = resolve(structure)
    c, d, r = _elem(c, S), _elem(d, S), _elem(r, S)
    return sum_certificate(constant_certificate(c, S), scaled_certificate(d, power_null_certificate(r, S)))


def _small_ratio(S, rng):
    k = rng.randint(2, 6)
    sign = rng.choice((1, -1))
    if S.carrier == "z1p":
        p = S.params["p"]
        return Z1p(sign, rng.randint(1, 3), p)
    return S.div(S.from_int(sign), S.from_int(k))


def _small_element(S, rng, allow_zero=True):
    lo = 0 if allow_zero else 1
    num = rng.randint(-6, 6)
    if not allow_zero and num == 0:
        num = 1
    if S.carrier == "z1p":
        return Z1p(num, rng.randint(0, 3), S.params["p"])
    return S.div(S.from_int(num), S.from_int(rng.randint(1, 6)))


def random_certificate_pairs(structure, count=20, seed=42):
    """Pairs of c + d r^n certificates with small c, d and |r| < 1; some limits are 0."""
    S = resolve(structure)
    rng = random.Random(seed)
    pairs = []
    for i in range(count):
        certs = []
        for _ in range(2):
            c = S.zero if rng.random() < 0.25 else _small_element(S, rng)
            d = _small_element(S, rng)
            certs.append(affine_geometric_certificate(c, d, _small_ratio(S, rng), S))
        pairs.append(tuple(certs))
    return pairs


def conv_hom_probe(pairs, eps_samples=None, probe_depth=64):
    """limit(xy) = limit(x) limit(y), limit(x+y) = limit(x) + limit(y), and kernel absorption."""
    failures = []
    checked = 0
    laws = ("product_limit", "sum_limit", "product_validates", "sum_validates", "kernel_absorbs", "kernel_detects")
    for idx, (cx, cy) in enumerate(pairs):
        S = cx.structure
        eps = default_epsilons(cx.norm.target) if eps_samples is None else eps_samples
        for which, c in (("x", cx), ("y", cy)):
            report = validate_convergence(c, eps, probe_depth)
            if not report.passed:
                raise InvalidInputCertificate(f"pair {idx}: input certificate {which} does not validate")
        checked += 1
        a, b = cx.limit, cy.limit
        tag = (f"pair {idx}", S.render(a), S.render(b))
        prod = product_certificate(cx, cy)
        if prod.limit != S.mul(a, b):
            failures.append(LawFailure("product_limit", tag, "lim xy = ab", S.render(prod.limit)))
        if not validate_convergence(prod, eps, probe_depth).passed:
            failures.append(LawFailure("product_validates", tag, "product certificate validates", "violations"))
        tot = sum_certificate(cx, cy)
        if tot.limit != S.add(a, b):
            failures.append(LawFailure("sum_limit", tag, "lim x+y = a+b", S.render(tot.limit)))
        if not validate_convergence(tot, eps, probe_depth).passed:
            failures.append(LawFailure("sum_validates", tag, "sum certificate validates", "violations"))
        one = constant_certificate(S.one, S)
        through_one = product_certificate(cx, one)
        if (through_one.limit == S.zero) != (a == S.zero):
            failures.append(LawFailure("kernel_detects", tag, "lim x*1 = 0 iff lim x = 0", S.render(through_one.limit)))
        if a == S.zero:
            absorbed = product_certificate(cy, cx)
            if absorbed.limit != S.zero or not validate_convergence(absorbed, eps, probe_depth).passed:
                failures.append(LawFailure("kernel_absorbs", tag, "y * (null x) stays null", S.render(absorbed.limit)))
    return LawReport("conv_hom", checked, failures, None, laws)
