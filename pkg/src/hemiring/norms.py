"""Hemiring-valued pseudonorms: absolute value, p-adic valuation, and the
finite-dimensional algebra norm built from structure constants."""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from typing import Any, Callable

import gmpy2

from .enclosure import Enclosure, PrecisionBudgetExceeded
from .errors import EmptyAlgebra, NotApplicable, NotTotallyOrdered, UnknownStructure, WrongStructure
from .laws import LawFailure, LawReport
from .maxtimes import BOTTOM, MaxTimes
from .structures import Capabilities, DEFAULT_SAMPLING, Structure, get_structure, resolve

mpq = gmpy2.mpq

STRENGTHS = ("pseudonorm", "multiplicative_norm", "ultrametric_valuation")


@dataclass(frozen=True, eq=False)
class Pseudonorm:
    """A map from ``source`` into the non-negative cone of ``target``."""

    source: Structure
    target: Structure
    map: Callable[[Any], Any]
    strength: str = "pseudonorm"
    kind: str = "custom"
    params: dict = field(default_factory=dict)

    def __call__(self, x):
        return self.map(x)

    @property
    def multiplicative(self):
        return self.strength in ("multiplicative_norm", "ultrametric_valuation")

    @property
    def ultrametric(self):
        return self.strength == "ultrametric_valuation"

    def to_json(self):
        if self.kind == "padic":
            return f"padic:{self.params['p']}"
        return self.kind

    def __repr__(self):
        return f"Pseudonorm({self.kind}, {self.source.id} -> {self.target.id})"


# ---------------------------------------------------------------------------
# absolute value


def abs_norm(structure):
    """|x| = max(x, -x) into the structure itself."""
    S = resolve(structure)
    if not S.capabilities.totally_ordered:
        raise NotTotallyOrdered(f"{S.id} is not totally ordered")

    def norm(x):
        if isinstance(x, Enclosure):
            return abs(x)
        return S.abs(x)

    strength = "multiplicative_norm" if S.capabilities.strict_order_compatible and S.capabilities.has_neg else "pseudonorm"
    return Pseudonorm(S, S, norm, strength, "abs")


# ---------------------------------------------------------------------------
# p-adic valuation


def padic_abs(r, p):
    """|r|_p = p^(-v_p(r)) as an element of G0, bottom for r = 0."""
    r = mpq(r)
    if r == 0:
        return BOTTOM
    _, vn = gmpy2.remove(r.numerator, p)
    _, vd = gmpy2.remove(r.denominator, p)
    v = int(vn) - int(vd)
    return MaxTimes(mpq(1, p**v) if v >= 0 else mpq(p ** (-v)))


def padic_valuation_norm(p):
    if not gmpy2.is_prime(p):
        raise UnknownStructure(f"padic:{p}")
    Q = get_structure("rational")
    G0 = get_structure("maxtimes-qpos")

    def norm(x):
        if isinstance(x, Enclosure):
            raise PrecisionBudgetExceeded("the p-adic valuation of an enclosure is unknown")
        return padic_abs(x, p)

    return Pseudonorm(Q, G0, norm, "ultrametric_valuation", "padic", {"p": p})


# ---------------------------------------------------------------------------
# Q^k with the sum of absolute values


def l1_norm(k):
    V = get_structure(f"qvec:{k}")
    Q = get_structure("rational")

    def norm(v):
        acc = mpq(0)
        for c in v:
            acc = acc + abs(c)
        return acc

    return Pseudonorm(V, Q, norm, "pseudonorm", "l1", {"dim": k})


def norm_from_json(text, structure=None):
    """Inverse of :meth:`Pseudonorm.to_json`; ``structure`` is the source."""
    if text in (None, "abs"):
        return abs_norm(structure)
    if text == "l1":
        S = resolve(structure)
        return l1_norm(S.params["dim"])
    if isinstance(text, str) and text.startswith("padic:"):
        return padic_valuation_norm(int(text[6:]))
    raise UnknownStructure(f"norm {text!r}")


def default_norm(structure):
    S = resolve(structure)
    if S.carrier == "qvec":
        return l1_norm(S.params["dim"])
    return abs_norm(S)


# ---------------------------------------------------------------------------
# finite-dimensional algebras


@dataclass(frozen=True)
class StructureConstants:
    """``gamma[i][j][k]`` is the coefficient of e_k in e_i e_j."""

    n: int
    gamma: tuple
    field: Structure

    def __post_init__(self):
        if self.n == 0:
            raise EmptyAlgebra("an algebra needs at least one basis element")
        g = self.gamma
        if len(g) != self.n or any(len(row) != self.n or any(len(c) != self.n for c in row) for row in g):
            raise WrongStructure(f"structure constants must form an {self.n}x{self.n}x{self.n} table")

    @classmethod
    def build(cls, gamma, field="rational"):
        F = resolve(field)
        n = len(gamma)
        if n == 0:
            raise EmptyAlgebra("an algebra needs at least one basis element")
        frozen = tuple(tuple(tuple(F.from_int(c) if isinstance(c, int) else c for c in cell) for cell in row) for row in gamma)
        return cls(n, frozen, F)

    @classmethod
    def from_json(cls, data):
        if isinstance(data, str):
            data = json.loads(data)
        F = get_structure(data.get("field", "rational"))
        n = int(data["n"])
        if n == 0:
            raise EmptyAlgebra("an algebra needs at least one basis element")
        gamma = tuple(tuple(tuple(F.parse(str(c)) for c in cell) for cell in row) for row in data["gamma"])
        return cls(n, gamma, F)

    @classmethod
    def load(cls, path):
        with open(path) as fh:
            return cls.from_json(json.load(fh))

    def to_json(self):
        r = self.field.render
        return {
            "n": self.n,
            "gamma": [[[r(c) for c in cell] for cell in row] for row in self.gamma],
            "field": self.field.id,
        }

    def entries(self):
        for row in self.gamma:
            for cell in row:
                yield from cell

    def is_zero(self):
        return all(c == self.field.zero for c in self.entries())


def algebra_structure(sc):
    """The algebra F^n with the product given by ``sc`` (no order)."""
    F, n = sc.field, sc.n

    def add(a, b):
        return tuple(x + y for x, y in zip(a, b))

    def neg(a):
        return tuple(-x for x in a)

    def mul(a, b):
        out = [F.zero] * n
        for i in range(n):
            if a[i] == F.zero:
                continue
            for j in range(n):
                if b[j] == F.zero:
                    continue
                ab = a[i] * b[j]
                cell = sc.gamma[i][j]
                for k in range(n):
                    if cell[k] != F.zero:
                        out[k] = out[k] + ab * cell[k]
        return tuple(out)

    def sample(rng, cfg):
        return tuple(F.sampler(rng, cfg) for _ in range(n))

    def render(a):
        return "[" + ", ".join(F.render(x) for x in a) + "]"

    return Structure(
        id=f"algebra:{F.id}^{n}",
        carrier="algebra",
        zero=tuple(F.zero for _ in range(n)),
        one=None,
        capabilities=Capabilities(
            has_one=False,
            totally_ordered=False,
            strict_order_compatible=False,
            strict_add_compatible=False,
            commutative=False,
        ),
        sampler=sample,
        from_int=lambda k: tuple(F.from_int(k) if i == 0 else F.zero for i in range(n)),
        render=render,
        contains=lambda a: isinstance(a, tuple) and len(a) == n,
        add=add,
        mul=mul,
        neg=neg,
        params={"dim": n, "constants": sc},
    )


def _target_max(H, values):
    acc = None
    for v in values:
        acc = v if acc is None else H.max(acc, v)
    return acc


def build_finite_dim_pseudonorm(sc, base=None):
    """||a||' = nM * sum_i ||a_i|| with M the largest ||gamma_ijk||.

    ``nM`` is n-fold addition in the target, so for a max-plus style target
    it collapses to M.  When every gamma_ijk is zero, M is replaced by the
    target's 1.
    """
    if sc.n == 0:
        raise EmptyAlgebra("an algebra needs at least one basis element")
    base = abs_norm(sc.field) if base is None else base
    H = base.target
    if not H.capabilities.totally_ordered:
        raise NotTotallyOrdered(f"norm target {H.id} is not totally ordered")
    if not H.capabilities.commutative:
        raise NotApplicable(f"norm target {H.id} is not commutative")
    M = _target_max(H, (base(c) for c in sc.entries()))
    zero_m = M == H.zero
    if zero_m:
        M = H.one
    nM = H.scale(sc.n, M)
    A = algebra_structure(sc)

    def raw(a):
        acc = H.zero
        for x in a:
            acc = H.add(acc, base(x))
        return acc

    def norm(a):
        return H.mul(nM, raw(a))

    params = {"M": M, "nM": nM, "zero_m": zero_m, "constants": sc, "base": base, "raw": raw}
    return Pseudonorm(A, H, norm, "pseudonorm", "algebra", params)


def raw_sum_norm(sc, base=None):
    """The uncorrected sum_i ||a_i||, which need not be submultiplicative."""
    base = abs_norm(sc.field) if base is None else base
    A = algebra_structure(sc)
    H = base.target

    def raw(a):
        acc = H.zero
        for x in a:
            acc = H.add(acc, base(x))
        return acc

    return Pseudonorm(A, H, raw, "pseudonorm", "raw_sum", {"constants": sc})


def random_structure_constants(rng, n_max=4, bound=10, field="rational"):
    """Random integer table with dimension in 1..n_max and |gamma| <= bound."""
    n = rng.randint(1, n_max)
    gamma = [[[rng.randint(-bound, bound) for _ in range(n)] for _ in range(n)] for _ in range(n)]
    return StructureConstants.build(gamma, field)


def find_submultiplicativity_violation(sc, base=None, trials=200, seed=0, bound=5):
    """Search small integer vectors for ``raw(ab) > raw(a) raw(b)``.

    Returns ``(a, b)`` or None.  Basis vectors are tried first.
    """
    norm = raw_sum_norm(sc, base)
    A, H = norm.source, norm.target
    F = sc.field
    basis = [tuple(F.one if i == k else F.zero for i in range(sc.n)) for k in range(sc.n)]
    candidates = [(a, b) for a in basis for b in basis]
    rng = random.Random(seed)
    for _ in range(trials):
        a = tuple(F.from_int(rng.randint(-bound, bound)) for _ in range(sc.n))
        b = tuple(F.from_int(rng.randint(-bound, bound)) for _ in range(sc.n))
        candidates.append((a, b))
    for a, b in candidates:
        if H.lt(H.mul(norm(a), norm(b)), norm(A.mul(a, b))):
            return a, b
    return None


# ---------------------------------------------------------------------------
# law checking


def check_pseudonorm_laws(norm, sample_count=1000, seed=42, config=DEFAULT_SAMPLING):
    """Sample pairs from the source and check the axioms the strength claims."""
    if isinstance(norm, str):
        norm = norm_from_json(norm)
    R, H = norm.source, norm.target
    has_mul = R.capabilities.has_one or R.carrier == "algebra"
    names = ["nonnegative", "zero_iff_zero", "triangle"]
    if has_mul:
        names.append("product_equal" if norm.multiplicative else "submultiplicative")
    if norm.ultrametric:
        names += ["ultrametric", "ultrametric_equality"]
    rng = random.Random(seed)
    pairs = [(R.sample(rng, config), R.sample(rng, config)) for _ in range(sample_count)]
    rr, rh = R.render, H.render
    failures = []

    def fail(law, inputs, expected, observed):
        failures.append(LawFailure(law, tuple(rr(x) for x in inputs), expected, observed))

    for r, s in [(R.zero, R.zero)] + pairs:
        nr, ns = norm(r), norm(s)
        if H.lt(nr, H.zero):
            fail("nonnegative", (r,), "||r|| >= 0", rh(nr))
        if (nr == H.zero) != (r == R.zero):
            fail("zero_iff_zero", (r,), "||r|| = 0 iff r = 0", rh(nr))
        d = norm(R.sub(r, s))
        if not H.le(d, H.add(nr, ns)):
            fail("triangle", (r, s), "||r-s|| <= ||r||+||s||", f"{rh(d)} > {rh(H.add(nr, ns))}")
        if has_mul:
            p = norm(R.mul(r, s))
            bound = H.mul(nr, ns)
            if norm.multiplicative:
                if p != bound:
                    fail("product_equal", (r, s), "||rs|| = ||r|| ||s||", f"{rh(p)} != {rh(bound)}")
            elif not H.le(p, bound):
                fail("submultiplicative", (r, s), "||rs|| <= ||r|| ||s||", f"{rh(p)} > {rh(bound)}")
        if norm.ultrametric:
            t = norm(R.add(r, s))
            m = H.max(nr, ns)
            if not H.le(t, m):
                fail("ultrametric", (r, s), "||r+s|| <= max(||r||, ||s||)", f"{rh(t)} > {rh(m)}")
            if nr != ns and t != m:
                fail("ultrametric_equality", (r, s), "||r+s|| = max when ||r|| != ||s||", f"{rh(t)} != {rh(m)}")
    return LawReport(f"pseudonorm:{norm.to_json()}", sample_count, failures, seed, tuple(names))


def check_metric(norm, sample_count=1000, seed=42, config=DEFAULT_SAMPLING):
    """d(x, z) <= d(x, y) + d(y, z) for d(x, y) = ||x - y||."""
    R, H = norm.source, norm.target
    rng = random.Random(seed)
    triples = [tuple(R.sample(rng, config) for _ in range(3)) for _ in range(sample_count)]
    failures = []
    for x, y, z in triples:
        dxz = norm(R.sub(x, z))
        bound = H.add(norm(R.sub(x, y)), norm(R.sub(y, z)))
        if not H.le(dxz, bound):
            failures.append(LawFailure("metric_triangle", (R.render(x), R.render(y), R.render(z)), "d(x,z) <= d(x,y)+d(y,z)", "violated"))
    return LawReport("metric", sample_count, failures, seed, ("metric_triangle",))
