"""Symbolic sequences, modulus functions, and convergence/Cauchy certificates.

A certificate is a claim: for every positive eps and every n >= modulus(eps)
the relevant gap is below eps.  Validation probes the claim on a finite
window ``[N, N + K]`` for a list of eps values.  Constructors in this module
build certificates whose moduli follow the usual limit-arithmetic proofs.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from typing import Any, Optional

import gmpy2

from .enclosure import BIT_BUDGET, Enclosure, Inconclusive, exact_power, floor_log2
from .errors import (
    BoundViolatedOnProbe,
    DivisionByZero,
    IndexBeforeStart,
    NotApplicable,
    NotAUnit,
    NotDense,
    NotShrinkable,
    NotTotallyOrdered,
    PreconditionFailed,
    PrecisionBudgetExceeded,
    UnknownStructure,
    WrongStructure,
)
from .norms import Pseudonorm, default_norm, norm_from_json
from .parser import TermExpression, evaluate, parse_element, parse_term_expression
from .structures import Structure, density_witness_for, get_structure, resolve, shrink_witness_for
from .z1p import Z1p

mpq = gmpy2.mpq

DEFAULT_PROBE_DEPTH = 64
PRECONDITION_WINDOW = 256
# largest exponent-times-degree allowed for exact powers in Z(X)
DEGREE_BUDGET = 1 << 16
# longest prefix ever summed or scanned term by term
PREFIX_LIMIT = 1 << 20


# ---------------------------------------------------------------------------
# powers that degrade gracefully


def power_function(S):
    """``(base, k) -> base^k`` for ``S``, using enclosures past the bit budget."""
    carrier = S.carrier
    if carrier == "rational":
        return exact_power
    if carrier == "z1p":
        p = S.params["p"]

        def z1p_power(base, k):
            if isinstance(base, Enclosure):
                return base**k
            size = max(abs(base.m).bit_length(), base.n * p.bit_length())
            if k <= 1 or base.m in (0, 1, -1) and base.n == 0 or size * k <= BIT_BUDGET:
                return base**k
            return Enclosure.small_power(base.to_mpq(), k)

        return z1p_power
    if carrier == "zx":

        def zx_power(base, k):
            if k * max(base.num.degree, base.den.degree, 1) > DEGREE_BUDGET:
                raise PrecisionBudgetExceeded(f"({base.render()})^{k} exceeds the degree budget")
            return base**k

        return zx_power
    return lambda base, k: base**k


# ---------------------------------------------------------------------------
# element <-> JSON


def element_to_json(S, x):
    if isinstance(x, Enclosure):
        return x.render()
    if S.carrier == "qvec":
        return [str(c) if not isinstance(c, Enclosure) else c.render() for c in x]
    return S.render(x)


def element_from_json(S, value):
    S = resolve(S)
    if S.carrier == "qvec":
        if not isinstance(value, (list, tuple)) or len(value) != S.params["dim"]:
            raise WrongStructure(f"expected a list of {S.params['dim']} rationals")
        return tuple(parse_element(str(c), "rational") for c in value)
    return parse_element(str(value), S)


# ---------------------------------------------------------------------------
# sequences


class Sequence:
    """Base class; subclasses define ``structure``, ``start`` and ``_term``."""

    structure: Structure
    start: int

    def term(self, n):
        if n < self.start:
            raise IndexBeforeStart(f"index {n} is before the first index {self.start}")
        return self._term(n)

    def terms(self, lo, hi):
        return [self.term(n) for n in range(lo, hi + 1)]

    def closed_partial_sum(self, n):
        """Sum of terms ``start..n`` in closed form, or None."""
        return None

    def to_json(self):
        raise NotImplementedError

    def render_term(self, n):
        return element_to_json(self.structure, self.term(n))


def _same(a, b):
    if a.structure != b.structure:
        raise WrongStructure(f"cannot combine sequences over {a.structure.id} and {b.structure.id}")
    return a.structure


@dataclass(frozen=True, eq=False)
class FromExpression(Sequence):
    expr: TermExpression
    structure: Structure
    start: int = 1

    def __post_init__(self):
        if isinstance(self.expr, str):
            object.__setattr__(self, "expr", parse_term_expression(self.expr))
        object.__setattr__(self, "structure", resolve(self.structure))
        object.__setattr__(self, "_power", power_function(self.structure))

    def _term(self, n):
        try:
            return evaluate(self.expr.root, n, self.structure, self._power)
        except NotAUnit as exc:
            raise WrongStructure(f"{exc} (at n={n})") from None

    def to_json(self):
        return {"kind": "expression", "term": self.expr.text, "start": self.start}


@dataclass(frozen=True, eq=False)
class Geometric(Sequence):
    """n -> r^n from n = 0."""

    r: Any
    structure: Structure

    def __post_init__(self):
        object.__setattr__(self, "structure", resolve(self.structure))
        object.__setattr__(self, "r", self.structure.coerce(self.r))
        object.__setattr__(self, "_power", power_function(self.structure))

    @property
    def start(self):
        return 0

    def _term(self, n):
        return self._power(self.r, n)

    def closed_partial_sum(self, n):
        S = self.structure
        if S.neg is None or self.r == S.one:
            return None
        try:
            inv = S.inverse(S.sub(S.one, self.r))
        except (NotApplicable, NotAUnit, DivisionByZero):
            return None
        return (S.one - self._power(self.r, n + 1)) * inv

    def to_json(self):
        return {"kind": "geometric", "r": element_to_json(self.structure, self.r)}


@dataclass(frozen=True, eq=False)
class PartialSums(Sequence):
    """n -> x_start + ... + x_n."""

    of: Sequence

    def __post_init__(self):
        object.__setattr__(self, "_lock", threading.Lock())
        object.__setattr__(self, "_cache", None)

    @property
    def structure(self):
        return self.of.structure

    @property
    def start(self):
        return self.of.start

    def _term(self, n):
        closed = self.of.closed_partial_sum(n)
        if closed is not None:
            return closed
        with self._lock:
            cached = self._cache
            if cached is not None and cached[0] <= n:
                k, acc = cached
            else:
                k, acc = self.start - 1, self.structure.zero
            if n - k > PREFIX_LIMIT:
                raise PrecisionBudgetExceeded(f"partial sum up to {n} needs too many terms")
            for i in range(k + 1, n + 1):
                acc = self.structure.add(acc, self.of.term(i))
            object.__setattr__(self, "_cache", (n, acc))
            return acc

    def to_json(self):
        return {"kind": "partial_sums", "of": self.of.to_json()}


@dataclass(frozen=True, eq=False)
class Condensed(Sequence):
    """i -> 2^i * x(2^i) from i = 0 (2^i x is the 2^i-fold sum)."""

    of: Sequence

    def __post_init__(self):
        if self.of.start > 1:
            raise IndexBeforeStart("condensation needs terms from index 1")

    @property
    def structure(self):
        return self.of.structure

    @property
    def start(self):
        return 0

    def _term(self, i):
        k = 1 << i
        return self.structure.from_int(k) * self.of.term(k)

    def to_json(self):
        return {"kind": "condensed", "of": self.of.to_json()}


@dataclass(frozen=True, eq=False)
class Scaled(Sequence):
    """n -> c * x_n."""

    c: Any
    of: Sequence

    def __post_init__(self):
        S = self.of.structure
        if S.carrier != "qvec":
            object.__setattr__(self, "c", S.coerce(self.c))

    @property
    def structure(self):
        return self.of.structure

    @property
    def start(self):
        return self.of.start

    def _term(self, n):
        return self.c * self.of.term(n)

    def closed_partial_sum(self, n):
        inner = self.of.closed_partial_sum(n)
        return None if inner is None else self.c * inner

    def to_json(self):
        return {"kind": "scaled", "c": element_to_json(self.structure, self.c), "of": self.of.to_json()}


@dataclass(frozen=True, eq=False)
class Sum(Sequence):
    a: Sequence
    b: Sequence

    def __post_init__(self):
        _same(self.a, self.b)

    @property
    def structure(self):
        return self.a.structure

    @property
    def start(self):
        return max(self.a.start, self.b.start)

    def _term(self, n):
        return self.structure.add(self.a.term(n), self.b.term(n))

    def closed_partial_sum(self, n):
        if self.a.start != self.b.start:
            return None
        x, y = self.a.closed_partial_sum(n), self.b.closed_partial_sum(n)
        if x is None or y is None:
            return None
        return self.structure.add(x, y)

    def to_json(self):
        return {"kind": "sum", "a": self.a.to_json(), "b": self.b.to_json()}


@dataclass(frozen=True, eq=False)
class Product(Sequence):
    a: Sequence
    b: Sequence

    def __post_init__(self):
        _same(self.a, self.b)

    @property
    def structure(self):
        return self.a.structure

    @property
    def start(self):
        return max(self.a.start, self.b.start)

    def _term(self, n):
        return self.a.term(n) * self.b.term(n)

    def to_json(self):
        return {"kind": "product", "a": self.a.to_json(), "b": self.b.to_json()}


@dataclass(frozen=True, eq=False)
class Shifted(Sequence):
    """n -> x_(n+k)."""

    k: int
    of: Sequence

    @property
    def structure(self):
        return self.of.structure

    @property
    def start(self):
        return max(self.of.start - self.k, 0)

    def _term(self, n):
        return self.of.term(n + self.k)

    def to_json(self):
        return {"kind": "shifted", "k": self.k, "of": self.of.to_json()}


@dataclass(frozen=True, eq=False)
class FiniteTableThen(Sequence):
    """Listed values first, then the terms of ``of``."""

    table: tuple
    of: Sequence

    def __post_init__(self):
        object.__setattr__(self, "table", tuple(self.table))

    @property
    def structure(self):
        return self.of.structure

    @property
    def start(self):
        return self.of.start

    def _term(self, n):
        i = n - self.start
        if i < len(self.table):
            return self.table[i]
        return self.of.term(n)

    def to_json(self):
        S = self.structure
        return {"kind": "table", "table": [element_to_json(S, x) for x in self.table], "of": self.of.to_json()}


@dataclass(frozen=True, eq=False)
class Componentwise(Sequence):
    """Vector sequence in Q^k from k rational sequences."""

    components: tuple

    def __post_init__(self):
        object.__setattr__(self, "components", tuple(self.components))
        object.__setattr__(self, "structure", get_structure(f"qvec:{len(self.components)}"))

    @property
    def start(self):
        return max(c.start for c in self.components)

    def _term(self, n):
        return tuple(c.term(n) for c in self.components)

    def closed_partial_sum(self, n):
        if len({c.start for c in self.components}) != 1:
            return None
        parts = [c.closed_partial_sum(n) for c in self.components]
        return None if any(p is None for p in parts) else tuple(parts)

    def to_json(self):
        return {"kind": "componentwise", "components": [c.to_json() for c in self.components]}


@dataclass(frozen=True, eq=False)
class Mapped(Sequence):
    """n -> ||x_n|| in the norm's target."""

    norm: Pseudonorm
    of: Sequence

    @property
    def structure(self):
        return self.norm.target

    @property
    def start(self):
        return self.of.start

    def _term(self, n):
        return self.norm(self.of.term(n))

    def to_json(self):
        return {"kind": "norms", "norm": self.norm.to_json(), "source": self.of.structure.id, "of": self.of.to_json()}


def term(seq, n):
    return seq.term(n)


def partial_sum(seq, n):
    """x_start + ... + x_n."""
    if n < seq.start:
        raise IndexBeforeStart(f"index {n} is before the first index {seq.start}")
    return PartialSums(seq).term(n)


def constant_sequence(c, structure):
    """n -> c, written as c * 1^n."""
    S = resolve(structure)
    return Scaled(c, Geometric(S.one, S))


def zero_sequence(structure, start=1):
    return FromExpression("0", structure, start)


def alternating_series_terms(x):
    """n -> (-1)^(n+1) x_n."""
    S = x.structure
    return Product(Scaled(S.neg(S.one), Geometric(S.neg(S.one), S)), x)


def sequence_from_json(data, structure):
    S = resolve(structure)
    kind = data.get("kind")
    if kind == "expression":
        return FromExpression(str(data["term"]), S, int(data.get("start", 1)))
    if kind == "geometric":
        return Geometric(element_from_json(S, data["r"]), S)
    if kind == "partial_sums":
        return PartialSums(sequence_from_json(data["of"], S))
    if kind == "condensed":
        return Condensed(sequence_from_json(data["of"], S))
    if kind == "scaled":
        return Scaled(element_from_json(S, data["c"]), sequence_from_json(data["of"], S))
    if kind == "sum":
        return Sum(sequence_from_json(data["a"], S), sequence_from_json(data["b"], S))
    if kind == "product":
        return Product(sequence_from_json(data["a"], S), sequence_from_json(data["b"], S))
    if kind == "shifted":
        return Shifted(int(data["k"]), sequence_from_json(data["of"], S))
    if kind == "table":
        return FiniteTableThen(tuple(element_from_json(S, v) for v in data["table"]), sequence_from_json(data["of"], S))
    if kind == "componentwise":
        return Componentwise(tuple(sequence_from_json(c, "rational") for c in data["components"]))
    if kind == "norms":
        src = get_structure(data["source"])
        return Mapped(norm_from_json(data["norm"], src), sequence_from_json(data["of"], src))
    raise WrongStructure(f"unknown sequence kind {kind!r}")


# ---------------------------------------------------------------------------
# modulus functions


class Modulus:
    """eps -> N.  ``structure`` is where eps lives."""

    def __call__(self, eps):
        return int(self.evaluate(eps))

    def evaluate(self, eps):
        raise NotImplementedError


def _require_positive(S, eps):
    if not S.is_positive(eps):
        raise ValueError(f"epsilon must be positive, got {S.render(eps)}")


@dataclass(frozen=True, eq=False)
class ConstantIndex(Modulus):
    N: int

    def evaluate(self, eps):
        return self.N

    def to_json(self):
        return {"rule": "constant", "N": self.N}


@dataclass(frozen=True, eq=False)
class PowerGap(Modulus):
    """Least-candidate k with ||r||^k < eps, estimated from degrees (Z(X)) or bit lengths (Q), then rechecked."""

    r: Any
    structure: Structure

    def __post_init__(self):
        S = resolve(self.structure)
        object.__setattr__(self, "structure", S)
        a = S.abs(self.r)
        if S.carrier == "zx":
            if a.is_zero() or a.magnitude_degree >= 0:
                raise NotApplicable(f"{S.render(self.r)} is not infinitesimal")
        elif not (S.lt(a, S.one) and S.lt(S.zero, a)):
            raise NotApplicable(f"PowerGap needs 0 < |r| < 1, got {S.render(self.r)}")
        object.__setattr__(self, "_abs", a)

    def evaluate(self, eps):
        S = self.structure
        _require_positive(S, eps)
        a = self._abs
        if S.carrier == "zx":
            # |r|^k has magnitude degree k*d(r); it is below eps once k*d(r) < d(eps)
            de, dr = eps.magnitude_degree, a.magnitude_degree
            k = max(1, -(-(1 - de) // -dr))
        else:
            qa, qe = S.to_rational(a), S.to_rational(eps)
            k = max(1, floor_log2(1 / qe) // (floor_log2(1 / qa) + 1))
        value = a**k
        while not S.lt(value, eps):
            k += 1
            value = value * a
        return k

    def to_json(self):
        return {"rule": "power_gap", "r": self.structure.render(self.r)}


@dataclass(frozen=True, eq=False)
class BernoulliArchimedean(Modulus):
    """With x = 1/|r| - 1, the least N with N*(x*eps) > 1; then |r|^n <= 1/(1+nx) < eps."""

    r: Any
    structure: Structure

    def __post_init__(self):
        S = resolve(self.structure)
        object.__setattr__(self, "structure", S)
        if S.to_rational is None or not S.capabilities.archimedean:
            raise NotApplicable(f"{S.id} is not an Archimedean subring of Q")
        q = abs(S.to_rational(self.r))
        if not 0 < q < 1:
            raise NotApplicable(f"Bernoulli modulus needs 0 < |r| < 1, got {S.render(self.r)}")
        object.__setattr__(self, "_x", 1 / q - 1)

    def evaluate(self, eps):
        S = self.structure
        _require_positive(S, eps)
        from .structures import rational_gap

        return rational_gap(self._x * S.to_rational(eps), mpq(1))

    def to_json(self):
        return {"rule": "bernoulli", "r": self.structure.render(self.r)}


@dataclass(frozen=True, eq=False)
class ArchimedeanGap(Modulus):
    """Least N >= 1 with N*eps > c (so c/n < eps for n >= N)."""

    c: Any
    structure: Structure

    def __post_init__(self):
        object.__setattr__(self, "structure", resolve(self.structure))

    def evaluate(self, eps):
        S = self.structure
        _require_positive(S, eps)
        n = S.archimedean_gap(eps, self.c)
        if n is None:
            raise NotApplicable(f"no natural n has n*{S.render(eps)} > {S.render(self.c)}")
        return n

    def to_json(self):
        return {"rule": "archimedean_gap", "c": self.structure.render(self.c)}


@dataclass(frozen=True, eq=False)
class MaxOf(Modulus):
    parts: tuple

    def __post_init__(self):
        object.__setattr__(self, "parts", tuple(self.parts))

    def evaluate(self, eps):
        return max(m(eps) for m in self.parts)

    def to_json(self):
        return {"rule": "max", "of": [m.to_json() for m in self.parts]}


@dataclass(frozen=True, eq=False)
class Offset(Modulus):
    inner: Modulus
    k: int

    def evaluate(self, eps):
        return self.inner(eps) + self.k

    def to_json(self):
        return {"rule": "offset", "of": self.inner.to_json(), "k": self.k}


@dataclass(frozen=True, eq=False)
class ExpShift(Modulus):
    """eps -> 2^m(eps)."""

    inner: Modulus

    def evaluate(self, eps):
        return 1 << self.inner(eps)

    def to_json(self):
        return {"rule": "exp_shift", "of": self.inner.to_json()}


def log2_shift_index(n1):
    """Smallest k >= 1 with 2^(k-1) + 1 >= n1."""
    t = max(n1 - 1, 1)
    return (t - 1).bit_length() + 1


@dataclass(frozen=True, eq=False)
class Log2Shift(Modulus):
    inner: Modulus

    def evaluate(self, eps):
        return log2_shift_index(self.inner(eps))

    def to_json(self):
        return {"rule": "log2_shift", "of": self.inner.to_json()}


@dataclass(frozen=True, eq=False)
class DensitySplit(Modulus):
    """eps -> max(a(beta), b(gamma)) with beta + gamma < eps from the density witness."""

    a: Modulus
    b: Modulus
    structure: Structure

    def __post_init__(self):
        S = resolve(self.structure)
        object.__setattr__(self, "structure", S)
        object.__setattr__(self, "_witness", density_witness_for(S))

    def evaluate(self, eps):
        beta, gamma = self._witness(eps)
        return max(self.a(beta), self.b(gamma))

    def to_json(self):
        return {"rule": "density_split", "a": self.a.to_json(), "b": self.b.to_json()}


@dataclass(frozen=True, eq=False)
class ShrinkComposed(Modulus):
    """eps -> inner(alpha) with bound*alpha < eps (side "right") or alpha*bound < eps ("left")."""

    inner: Modulus
    bound: Any
    structure: Structure
    side: str = "right"

    def __post_init__(self):
        S = resolve(self.structure)
        object.__setattr__(self, "structure", S)
        object.__setattr__(self, "bound", S.coerce(self.bound))
        if not S.is_positive(self.bound):
            raise PreconditionFailed(f"shrink bound must be positive, got {S.render(self.bound)}")
        if self.side not in ("left", "right"):
            raise ValueError("side must be 'left' or 'right'")
        object.__setattr__(self, "_witness", shrink_witness_for(S))

    def evaluate(self, eps):
        left, right = self._witness(eps, self.bound)
        return self.inner(right if self.side == "right" else left)

    def to_json(self):
        return {
            "rule": "shrink",
            "of": self.inner.to_json(),
            "bound": self.structure.render(self.bound),
            "side": self.side,
        }


def modulus_from_json(data, structure):
    S = resolve(structure)
    rule = data.get("rule")
    if rule == "constant":
        return ConstantIndex(int(data["N"]))
    if rule == "power_gap":
        return PowerGap(parse_element(data["r"], S), S)
    if rule == "bernoulli":
        return BernoulliArchimedean(parse_element(data["r"], S), S)
    if rule == "archimedean_gap":
        return ArchimedeanGap(parse_element(data["c"], S), S)
    if rule == "max":
        return MaxOf(tuple(modulus_from_json(m, S) for m in data["of"]))
    if rule == "offset":
        return Offset(modulus_from_json(data["of"], S), int(data["k"]))
    if rule == "exp_shift":
        return ExpShift(modulus_from_json(data["of"], S))
    if rule == "log2_shift":
        return Log2Shift(modulus_from_json(data["of"], S))
    if rule == "density_split":
        return DensitySplit(modulus_from_json(data["a"], S), modulus_from_json(data["b"], S), S)
    if rule == "shrink":
        return ShrinkComposed(modulus_from_json(data["of"], S), parse_element(data["bound"], S), S, data.get("side", "right"))
    raise WrongStructure(f"unknown modulus rule {rule!r}")


def check_modulus_monotone(modulus, eps_chain, structure):
    """Pairs (eps_big, eps_small) in a decreasing chain where N went down."""
    S = resolve(structure)
    ordered = sorted(eps_chain, key=_key(S), reverse=True)
    values = [modulus(e) for e in ordered]
    return [(ordered[i], ordered[i + 1]) for i in range(len(values) - 1) if values[i + 1] < values[i]]


def _key(S):
    import functools

    return functools.cmp_to_key(S.compare)


# ---------------------------------------------------------------------------
# default eps ladders


def default_epsilons(structure, count=6):
    """1/10 .. 1/10^6 for Q, the nearest p-powers below them for Z[1/p], 1/X .. 1/X^6 for Z(X)."""
    S = resolve(structure)
    if S.base is not None:
        return default_epsilons(S.base, count)
    if S.carrier == "rational":
        return [mpq(1, 10**j) for j in range(1, count + 1)]
    if S.carrier == "z1p":
        p = S.params["p"]
        out = []
        for j in range(1, count + 1):
            k = 0
            while p**k < 10**j:
                k += 1
            out.append(Z1p(1, k, p))
        return out
    if S.carrier == "zx":
        X = S.params["generator"]
        return [X.inverse() ** j for j in range(1, count + 1)]
    if S.carrier == "maxtimes":
        from .maxtimes import MaxTimes

        return [MaxTimes(mpq(1, 10**j)) for j in range(1, count + 1)]
    raise NotApplicable(f"no default epsilon ladder for {S.id}")


def parse_epsilons(text, structure):
    """Comma separated element literals, each positive."""
    S = resolve(structure)
    out = []
    for part in str(text).split(","):
        part = part.strip()
        if not part:
            continue
        e = parse_element(part, S)
        if not S.is_positive(e):
            raise WrongStructure(f"epsilon {part!r} is not positive")
        out.append(e)
    if not out:
        raise WrongStructure("no epsilon values given")
    return out


# ---------------------------------------------------------------------------
# certificates


def _metadata(constructed_by, trusted=True, assumptions=(), external=(), **extra):
    md = {
        "constructed_by": constructed_by,
        "trusted_by_construction": trusted,
        "assumptions": list(assumptions),
        "external": list(external),
    }
    md.update(extra)
    return md


@dataclass(frozen=True, eq=False)
class ConvergenceCertificate:
    """Claim: ||x_n - limit|| < eps whenever n >= modulus(eps)."""

    sequence: Sequence
    limit: Any
    modulus: Modulus
    norm: Optional[Pseudonorm] = None
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.norm is None:
            object.__setattr__(self, "norm", default_norm(self.sequence.structure))
        if self.structure.carrier != "qvec":
            object.__setattr__(self, "limit", self.structure.coerce(self.limit))

    @property
    def structure(self):
        return self.sequence.structure

    def to_json(self):
        S = self.structure
        return {
            "structure": S.id,
            "sequence": self.sequence.to_json(),
            "limit": element_to_json(S, self.limit),
            "modulus": self.modulus.to_json(),
            "norm": self.norm.to_json(),
        }


@dataclass(frozen=True, eq=False)
class CauchyCertificate:
    """Claim: ||x_n - x_m|| < eps whenever n >= m >= modulus(eps)."""

    sequence: Sequence
    modulus: Modulus
    norm: Optional[Pseudonorm] = None
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.norm is None:
            object.__setattr__(self, "norm", default_norm(self.sequence.structure))

    @property
    def structure(self):
        return self.sequence.structure

    def to_json(self):
        return {
            "structure": self.structure.id,
            "sequence": self.sequence.to_json(),
            "modulus": self.modulus.to_json(),
            "norm": self.norm.to_json(),
        }


def certificate_from_json(data):
    S = get_structure(data["structure"])
    seq = sequence_from_json(data["sequence"], S)
    norm = norm_from_json(data.get("norm"), S)
    modulus = modulus_from_json(data["modulus"], norm.target)
    md = _metadata("json", trusted=False)
    if "limit" in data and data["limit"] is not None:
        return ConvergenceCertificate(seq, element_from_json(S, data["limit"]), modulus, norm, md)
    return CauchyCertificate(seq, modulus, norm, md)


# ---------------------------------------------------------------------------
# validation


@dataclass(frozen=True)
class Violation:
    epsilon: str
    n: int
    gap: str
    m: Optional[int] = None
    inconclusive: bool = False

    def as_dict(self):
        d = {"epsilon": self.epsilon, "n": index_to_json(self.n), "gap": self.gap}
        if self.m is not None:
            d["m"] = index_to_json(self.m)
        if self.inconclusive:
            d["inconclusive"] = True
        return d


def index_to_json(n):
    """Indices fit a JSON int up to 64 bits; beyond that powers of two print as ``2^k``."""
    n = int(n)
    if n.bit_length() <= 64:
        return n
    if n & (n - 1) == 0:
        return f"2^{n.bit_length() - 1}"
    return str(n)


@dataclass
class ValidationReport:
    kind: str
    violations: list
    checks: list
    probe_depth: int
    metadata: dict = field(default_factory=dict)

    @property
    def passed(self):
        return not self.violations

    def as_dict(self):
        return {
            "pass": self.passed,
            "violations": [v.as_dict() for v in self.violations],
            "kind": self.kind,
            "probe_depth": self.probe_depth,
            "checks": [{"epsilon": e, "N": index_to_json(n)} for e, n in self.checks],
        }


def _lt_decided(H, a, b):
    """``a < b`` or None when enclosures leave it open."""
    try:
        return H.lt(a, b)
    except Inconclusive:
        return None


def _render_gap(H, g):
    return g.render() if isinstance(g, Enclosure) else element_to_json(H, g)


def validate_convergence(cert, eps_samples=None, probe_depth=DEFAULT_PROBE_DEPTH):
    """Probe ||x_n - limit|| < eps on ``[N, N + K]`` for each eps."""
    seq, norm = cert.sequence, cert.norm
    S, H = seq.structure, norm.target
    eps_samples = default_epsilons(H) if eps_samples is None else list(eps_samples)
    if not eps_samples:
        raise ValueError("at least one epsilon is needed")
    violations, checks = [], []
    for eps in eps_samples:
        _require_positive(H, eps)
        e_text = H.render(eps)
        N = max(cert.modulus(eps), seq.start)
        checks.append((e_text, N))
        for n in range(N, N + probe_depth + 1):
            try:
                gap = norm(S.sub(seq.term(n), cert.limit))
            except DivisionByZero:
                violations.append(Violation(e_text, n, "undefined"))
                continue
            except PrecisionBudgetExceeded:
                violations.append(Violation(e_text, n, "unavailable", inconclusive=True))
                continue
            ok = _lt_decided(H, gap, eps)
            if not ok:
                violations.append(Violation(e_text, n, _render_gap(H, gap), inconclusive=ok is None))
    return ValidationReport("convergence", violations, checks, probe_depth, dict(cert.metadata))


def _window_terms(seq, N, K):
    """Increments x_(N+1) .. x_(N+K) of a series window."""
    return [seq.of.term(i) for i in range(N + 1, N + K + 1)]


def _window_values(seq, N, K, increments=None):
    """Values whose pairwise differences equal x_n - x_m on ``[N, N + K]``."""
    S = seq.structure
    if isinstance(seq, PartialSums):
        acc = S.zero
        vals = [acc]
        for t in _window_terms(seq, N, K) if increments is None else increments:
            acc = S.add(acc, t)
            vals.append(acc)
        return vals
    return [seq.term(n) for n in range(N, N + K + 1)]


_SYMMETRIC = ("abs", "l1")


def _variation_below(H, norm, increments, eps):
    """Sum of ||increment|| < eps bounds every partial-sum gap in the window."""
    if norm.kind not in _SYMMETRIC:
        return None
    total = H.zero
    try:
        for t in increments:
            total = H.add(total, norm(t))
        return H.lt(total, eps)
    except Inconclusive:
        return None


def _spread_below(S, norm, vals, eps):
    """For |.| on a total order: all pairwise gaps < eps iff max - min < eps."""
    if norm.kind != "abs" or not S.capabilities.totally_ordered:
        return None
    try:
        hi = lo = vals[0]
        for v in vals[1:]:
            if S.lt(hi, v):
                hi = v
            if S.lt(v, lo):
                lo = v
        return S.lt(norm(S.sub(hi, lo)), eps)
    except Inconclusive:
        return None


def validate_cauchy(cert, eps_samples=None, probe_depth=DEFAULT_PROBE_DEPTH):
    """Probe ||x_n - x_m|| < eps for all N <= m <= n <= N + K."""
    seq, norm = cert.sequence, cert.norm
    S, H = seq.structure, norm.target
    eps_samples = default_epsilons(H) if eps_samples is None else list(eps_samples)
    if not eps_samples:
        raise ValueError("at least one epsilon is needed")
    violations, checks = [], []
    for eps in eps_samples:
        _require_positive(H, eps)
        e_text = H.render(eps)
        N = max(cert.modulus(eps), seq.start)
        checks.append((e_text, N))
        try:
            increments = _window_terms(seq, N, probe_depth) if isinstance(seq, PartialSums) else None
            if increments is not None and _variation_below(H, norm, increments, eps):
                continue
            vals = _window_values(seq, N, probe_depth, increments)
        except DivisionByZero as exc:
            violations.append(Violation(e_text, exc.index if exc.index is not None else N, "undefined"))
            continue
        except PrecisionBudgetExceeded:
            violations.append(Violation(e_text, N, "unavailable", inconclusive=True))
            continue
        if _spread_below(S, norm, vals, eps):
            continue
        for i in range(len(vals)):
            for j in range(i + 1, len(vals)):
                gap = norm(S.sub(vals[j], vals[i]))
                ok = _lt_decided(H, gap, eps)
                if not ok:
                    violations.append(Violation(e_text, N + j, _render_gap(H, gap), m=N + i, inconclusive=ok is None))
    return ValidationReport("cauchy", violations, checks, probe_depth, dict(cert.metadata))


def validate(cert, eps_samples=None, probe_depth=DEFAULT_PROBE_DEPTH):
    if isinstance(cert, ConvergenceCertificate):
        return validate_convergence(cert, eps_samples, probe_depth)
    return validate_cauchy(cert, eps_samples, probe_depth)


# ---------------------------------------------------------------------------
# certificate constructors


def _ordered_dense(H, need_shrink=False):
    if not H.capabilities.totally_ordered:
        raise NotTotallyOrdered(f"{H.id} is not totally ordered")
    if not H.capabilities.dense:
        raise NotDense(f"{H.id} is not dense")
    if need_shrink and not H.capabilities.shrinkable:
        raise NotShrinkable(f"{H.id} is not shrinkable")


def bound_from_certificate(cert, eps0=None):
    """A positive s1 with ||x_n|| <= s1 for every n.

    Past N = modulus(eps0), ||x_n|| <= ||x_n - a|| + ||-a|| < eps0 + ||-a||;
    below N the finitely many terms are scanned.
    """
    seq, norm = cert.sequence, cert.norm
    S, H = seq.structure, norm.target
    eps0 = H.one if eps0 is None else eps0
    _require_positive(H, eps0)
    neg_limit = S.neg(cert.limit) if S.neg is not None else cert.limit
    s1 = H.add(norm(neg_limit), eps0)
    N = cert.modulus(eps0)
    if N - seq.start > PREFIX_LIMIT:
        raise PrecisionBudgetExceeded(f"bounding {N - seq.start} prefix terms is too expensive")
    for n in range(seq.start, N):
        s1 = H.max(s1, norm(seq.term(n)))
    if not H.is_positive(s1):
        s1 = H.one
    return s1


def cauchy_from_convergence(cert):
    """x_n -> a gives ||x_n - x_m|| < beta + gamma < eps past max(N(beta), N(gamma))."""
    H = cert.norm.target
    _ordered_dense(H)
    md = _metadata("cauchy_from_convergence", assumptions=cert.metadata.get("assumptions", ()))
    return CauchyCertificate(cert.sequence, DensitySplit(cert.modulus, cert.modulus, H), cert.norm, md)


def constant_certificate(c, structure):
    S = resolve(structure)
    c = S.coerce(c)
    return ConvergenceCertificate(constant_sequence(c, S), c, ConstantIndex(0), None, _metadata("constant"))


def scaled_certificate(c, cert):
    """c*x_n -> c*a with ||c(x_n - a)|| <= ||c|| ||x_n - a|| < ||c|| alpha_r < eps."""
    seq, norm = cert.sequence, cert.norm
    S, H = seq.structure, norm.target
    c = S.coerce(c)
    limit = c * cert.limit
    if c == S.zero:
        modulus = ConstantIndex(seq.start)
    else:
        _ordered_dense(H, need_shrink=True)
        modulus = ShrinkComposed(cert.modulus, norm(c), H, "right")
    md = _metadata("scaled_certificate", assumptions=cert.metadata.get("assumptions", ()))
    return ConvergenceCertificate(Scaled(c, seq), limit, modulus, norm, md)


def sum_certificate(cert_x, cert_y):
    """x_n + y_n -> a + b with modulus max(N_x(beta), N_y(gamma))."""
    S = _same(cert_x.sequence, cert_y.sequence)
    H = cert_x.norm.target
    _ordered_dense(H)
    modulus = DensitySplit(cert_x.modulus, cert_y.modulus, H)
    md = _metadata(
        "sum_certificate",
        assumptions=list(cert_x.metadata.get("assumptions", ())) + list(cert_y.metadata.get("assumptions", ())),
        external=["limit arithmetic in normed groups is re-derived here from the triangle inequality"],
    )
    return ConvergenceCertificate(
        Sum(cert_x.sequence, cert_y.sequence), S.add(cert_x.limit, cert_y.limit), modulus, cert_x.norm, md
    )


def product_certificate(cert_x, cert_y, eps0=None):
    """x_n y_n -> ab.

    With s1 bounding ||x_n||, split eps into beta + gamma, pick K_r with
    s1 K_r < beta and M_l with M_l ||b|| < gamma; past max(N_y(K_r), N_x(M_l))
    ||x_n y_n - ab|| <= ||x_n|| ||y_n - b|| + ||x_n - a|| ||b|| < eps.
    When b = 0 the bounded-times-null construction is used instead.
    """
    S = _same(cert_x.sequence, cert_y.sequence)
    norm = cert_x.norm
    H = norm.target
    _ordered_dense(H, need_shrink=True)
    s1 = bound_from_certificate(cert_x, eps0)
    b = cert_y.limit
    if b == S.zero:
        out = bounded_times_null_certificate(cert_y, cert_x.sequence, s1, null_on_left=False)
        md = dict(out.metadata)
        md["constructed_by"] = "product_certificate (bounded times null)"
        return ConvergenceCertificate(out.sequence, out.limit, out.modulus, out.norm, md)
    modulus = DensitySplit(
        ShrinkComposed(cert_y.modulus, s1, H, "right"),
        ShrinkComposed(cert_x.modulus, norm(b), H, "left"),
        H,
    )
    md = _metadata(
        "product_certificate",
        assumptions=list(cert_x.metadata.get("assumptions", ())) + list(cert_y.metadata.get("assumptions", ())),
        external=["limit arithmetic in normed groups is re-derived here from submultiplicativity and a bound on x"],
        bound=H.render(s1),
    )
    return ConvergenceCertificate(Product(cert_x.sequence, cert_y.sequence), cert_x.limit * b, modulus, norm, md)


def bounded_times_null_certificate(null_cert, bounded_seq, bound, null_on_left=False, probe_depth=PRECONDITION_WINDOW):
    """||x_n y_n|| <= ||x_n|| ||y_n|| <= M eps_r < eps for a null x and ||y_n|| <= M.

    The bound is checked exactly on the first ``probe_depth + 1`` indices.
    """
    norm = null_cert.norm
    H = norm.target
    S = _same(null_cert.sequence, bounded_seq)
    _ordered_dense(H, need_shrink=True)
    bound = H.coerce(bound)
    if not H.is_positive(bound):
        raise PreconditionFailed(f"the bound M must be positive, got {H.render(bound)}")
    lo = bounded_seq.start
    hi = lo + probe_depth
    for n in range(lo, hi + 1):
        v = norm(bounded_seq.term(n))
        if H.lt(bound, v):
            raise BoundViolatedOnProbe(f"||y_{n}|| = {H.render(v)} exceeds M = {H.render(bound)}")
    if null_on_left:
        seq = Product(null_cert.sequence, bounded_seq)
        modulus = ShrinkComposed(null_cert.modulus, bound, H, "left")
    else:
        seq = Product(bounded_seq, null_cert.sequence)
        modulus = ShrinkComposed(null_cert.modulus, bound, H, "right")
    md = _metadata(
        "bounded_times_null_certificate",
        assumptions=list(null_cert.metadata.get("assumptions", ()))
        + [f"||y_n|| <= {H.render(bound)} checked for n in [{lo}, {hi}]"],
    )
    return ConvergenceCertificate(seq, S.zero, modulus, norm, md)


def power_null_certificate(r, structure):
    """Certificate for r^n -> 0.

    Archimedean subrings of Q with |r| < 1 use the Bernoulli modulus; Z(X)
    needs r infinitesimal (negative magnitude degree) and uses degree
    arithmetic.  Anything else raises NotApplicable.
    """
    S = resolve(structure)
    if isinstance(r, str):
        r = parse_element(r, S)
    seq = Geometric(r, S)
    if r == S.zero:
        return ConvergenceCertificate(seq, S.zero, ConstantIndex(1), None, _metadata("power_null_certificate"))
    if not S.capabilities.totally_ordered or S.neg is None and S.base is None:
        raise NotApplicable(f"{S.id} is not a totally ordered ring")
    if S.carrier in ("rational", "z1p") and S.capabilities.archimedean:
        q = S.to_rational(r)
        if not -1 < q < 1:
            raise NotApplicable(f"|r| < 1 fails for r = {S.render(r)}, so r^n does not tend to 0")
        md = _metadata("power_null_certificate", rule="bernoulli")
        return ConvergenceCertificate(seq, S.zero, BernoulliArchimedean(r, S), None, md)
    if S.carrier == "zx":
        a = abs(r)
        if a.magnitude_degree >= 0:
            raise NotApplicable(
                f"{S.render(r)} is not infinitesimal in Z(X); |r|^n stays above 1/X for every n, "
                "so r^n does not tend to 0 (Z(X) is not Archimedean)"
            )
        md = _metadata("power_null_certificate", rule="degree")
        return ConvergenceCertificate(seq, S.zero, PowerGap(r, S), None, md)
    raise NotApplicable(f"no power-null certificate construction for {S.id}")


def harmonic_null_certificate(structure, c=None):
    """c/n -> 0 in an Archimedean structure, modulus least N with N eps > c."""
    S = resolve(structure)
    c = S.one if c is None else c
    seq = Scaled(c, FromExpression("1/n", S)) if c != S.one else FromExpression("1/n", S)
    return ConvergenceCertificate(seq, S.zero, ArchimedeanGap(S.abs(c), S), None, _metadata("harmonic_null_certificate"))


def zero_series_certificate(structure, start=1):
    """The series of zeros is Cauchy from index 1."""
    S = resolve(structure)
    return CauchyCertificate(PartialSums(zero_sequence(S, start)), ConstantIndex(1), None, _metadata("zero_series"))
