"""Ordered structure descriptors, the registry, and density/shrink witnesses.

A :class:`Structure` bundles the carrier operations of one ordered hemiring
(or semiring, ring, field) with capability flags and a seeded sampler.
Elements are plain Python objects supporting the arithmetic operators, so
generic code can write ``a + b`` whatever the carrier; the descriptor's
``add``/``mul``/``neg`` fields are the same operations exposed as callables.

Registered identifiers::

    rational          the field Q
    z1p:<p>           the ring Z[1/p]
    zx                the non-Archimedean ordered field Z(X)
    maxtimes-qpos     the max-times semiring G0 over (Q_{>0}, *)
    nonneg:<base>     the non-negative cone of a totally ordered ring
    qvec:<k>          the additive group Q^k (no order, no product)
"""

from __future__ import annotations

import operator
import random
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Any, Callable, Optional

import gmpy2

from . import zx as _zx
from .errors import (
    NotApplicable,
    NotAUnit,
    NotDense,
    NotShrinkable,
    UnknownStructure,
    WrongStructure,
    DivisionByZero,
)
from .maxtimes import BOTTOM, MaxTimes
from .poly import Poly
from .z1p import Z1p

mpq = gmpy2.mpq
MPQ = type(mpq(0))
MPZ = type(gmpy2.mpz(0))


@dataclass(frozen=True)
class Capabilities:
    has_one: bool = True
    has_neg: bool = True
    has_inverses: bool = False
    totally_ordered: bool = True
    # a < b and 0 < c imply ac < bc and ca < cb
    strict_order_compatible: bool = True
    # a < b implies a + c < b + c; false for max-plus style addition
    strict_add_compatible: bool = True
    dense: bool = False
    shrinkable: bool = False
    archimedean: Optional[bool] = None
    commutative: bool = True

    def as_dict(self):
        return {k: getattr(self, k) for k in self.__dataclass_fields__}


@dataclass(frozen=True)
class SamplingConfig:
    """Bounds for the seeded element samplers."""

    int_bound: int = 10**6
    max_degree: int = 6
    max_exponent: int = 20
    special_prob: float = 0.1


DEFAULT_SAMPLING = SamplingConfig()


@dataclass(frozen=True, eq=False)
class Structure:
    id: str
    carrier: str
    zero: Any
    one: Any
    capabilities: Capabilities
    sampler: Callable[[random.Random, SamplingConfig], Any]
    from_int: Callable[[int], Any]
    render: Callable[[Any], str]
    contains: Callable[[Any], bool]
    add: Callable[[Any, Any], Any] = operator.add
    mul: Callable[[Any, Any], Any] = operator.mul
    neg: Optional[Callable[[Any], Any]] = operator.neg
    invert: Optional[Callable[[Any], Any]] = None
    to_rational: Optional[Callable[[Any], Any]] = None
    gap: Optional[Callable[[Any, Any], Optional[int]]] = None
    base: Optional["Structure"] = None
    params: dict = field(default_factory=dict)

    def __repr__(self):
        return f"Structure({self.id!r})"

    def __eq__(self, other):
        return isinstance(other, Structure) and other.id == self.id

    def __hash__(self):
        return hash(("Structure", self.id))

    # order ------------------------------------------------------------
    def compare(self, a, b):
        if not self.capabilities.totally_ordered:
            raise NotApplicable(f"{self.id} carries no total order")
        if a < b:
            return -1
        if b < a:
            return 1
        return 0

    def lt(self, a, b):
        return self.compare(a, b) < 0

    def le(self, a, b):
        return self.compare(a, b) <= 0

    def is_positive(self, a):
        return self.compare(self.zero, a) < 0

    def max(self, a, b):
        return b if self.compare(a, b) < 0 else a

    def abs(self, a):
        if self.neg is None:
            return a
        return self.max(a, self.neg(a))

    # arithmetic -------------------------------------------------------
    def sub(self, a, b):
        if self.neg is None:
            raise NotApplicable(f"{self.id} has no additive inverses")
        return self.add(a, self.neg(b))

    def inverse(self, a):
        if self.invert is None:
            raise NotApplicable(f"{self.id} has no multiplicative inverses")
        return self.invert(a)

    def div(self, a, b):
        return self.mul(a, self.inverse(b))

    def scale(self, k, a):
        """``a + a + ... + a`` (k times); zero for k = 0."""
        acc = self.zero
        for _ in range(k):
            acc = self.add(acc, a)
        return acc

    def power(self, a, k):
        acc = self.one
        for _ in range(k):
            acc = self.mul(acc, a)
        return acc

    def archimedean_gap(self, f, g):
        """Least natural n >= 1 with n*f > g, or None when none exists."""
        if self.gap is None:
            raise NotApplicable(f"{self.id} has no archimedean gap procedure")
        return self.gap(f, g)

    # sampling ---------------------------------------------------------
    def sample(self, rng, config=DEFAULT_SAMPLING, *, positive=False, nonzero=False):
        while True:
            x = self.sampler(rng, config)
            if positive:
                if self.neg is not None and self.compare(x, self.zero) < 0:
                    x = self.neg(x)
                if self.compare(self.zero, x) < 0:
                    return x
                continue
            if nonzero and x == self.zero:
                continue
            return x

    def parse(self, text):
        from .parser import parse_element

        return parse_element(text, self)

    def coerce(self, x):
        """Element literals and plain integers become canonical elements."""
        if isinstance(x, str):
            return self.parse(x)
        if isinstance(x, (int, MPZ)) and not isinstance(x, bool):
            return self.from_int(int(x))
        if isinstance(x, bool):
            raise WrongStructure("booleans are not elements")
        return x


# ---------------------------------------------------------------------------
# rational numbers


def _rational_sample(rng, cfg):
    if rng.random() < cfg.special_prob:
        return mpq(rng.choice((0, 1, -1, 2, -2, 1, 0)), rng.choice((1, 1, 2, 3)))
    b = cfg.int_bound
    return mpq(rng.randint(-b, b), rng.randint(1, b))


def _rational_invert(a):
    if a == 0:
        raise DivisionByZero("inverse of zero rational")
    return 1 / mpq(a)


def rational_gap(f, g):
    """Least n >= 1 with n*f > g in an Archimedean field (f > 0)."""
    f, g = mpq(f), mpq(g)
    if f <= 0:
        from .errors import NonPositiveF

        raise NonPositiveF("archimedean gap needs f > 0")
    if g < f:
        return 1
    q = g / f
    return int(gmpy2.floor(q)) + 1


def _is_mpq(x):
    return isinstance(x, (MPQ, int, MPZ))


def _make_rational():
    return Structure(
        id="rational",
        carrier="rational",
        zero=mpq(0),
        one=mpq(1),
        capabilities=Capabilities(has_inverses=True, dense=True, shrinkable=True, archimedean=True),
        sampler=_rational_sample,
        from_int=lambda k: mpq(k),
        render=lambda a: str(mpq(a)),
        contains=_is_mpq,
        invert=_rational_invert,
        to_rational=mpq,
        gap=rational_gap,
    )


# ---------------------------------------------------------------------------
# Z[1/p]


def _is_prime(p):
    return p >= 2 and gmpy2.is_prime(p)


def _make_z1p(p):
    def sample(rng, cfg):
        if rng.random() < cfg.special_prob:
            return Z1p(rng.choice((0, 1, -1, p, 1)), rng.choice((0, 1, 2)), p)
        b = cfg.int_bound
        return Z1p(rng.randint(-b, b), rng.randint(0, cfg.max_exponent), p)

    def gap(f, g):
        return rational_gap(f.to_mpq(), g.to_mpq())

    return Structure(
        id=f"z1p:{p}",
        carrier="z1p",
        zero=Z1p(0, 0, p),
        one=Z1p(1, 0, p),
        capabilities=Capabilities(has_inverses=False, dense=True, shrinkable=True, archimedean=True),
        sampler=sample,
        from_int=lambda k: Z1p(int(k), 0, p),
        render=lambda a: a.render(),
        contains=lambda a: isinstance(a, Z1p) and a.p == p,
        invert=lambda a: a.inverse(),
        to_rational=lambda a: a.to_mpq(),
        gap=gap,
        params={"p": p},
    )


# ---------------------------------------------------------------------------
# Z(X)


def _random_poly(rng, cfg, nonzero=False):
    b = cfg.int_bound
    while True:
        d = rng.randint(0, cfg.max_degree)
        coeffs = [rng.randint(-b, b) for _ in range(d + 1)]
        p = Poly(coeffs)
        if p or not nonzero:
            return p


def _zx_sample(rng, cfg):
    if rng.random() < cfg.special_prob:
        k = rng.randint(-3, 3)
        return rng.choice((_zx.ZERO, _zx.ONE, _zx.X, _zx.X.inverse(), _zx.RationalFunction.from_int(k)))
    return _zx.RationalFunction(_random_poly(rng, cfg), _random_poly(rng, cfg, nonzero=True))


def _make_zx():
    return Structure(
        id="zx",
        carrier="zx",
        zero=_zx.ZERO,
        one=_zx.ONE,
        capabilities=Capabilities(has_inverses=True, dense=True, shrinkable=True, archimedean=False),
        sampler=_zx_sample,
        from_int=_zx.RationalFunction.from_int,
        render=lambda a: a.render(),
        contains=lambda a: isinstance(a, _zx.RationalFunction),
        invert=lambda a: a.inverse(),
        gap=_zx.zx_archimedean_gap,
        params={"generator": _zx.X},
    )


# ---------------------------------------------------------------------------
# G0 = (Q_{>0} u {0}, max, *)


def _maxtimes_sample(rng, cfg):
    if rng.random() < cfg.special_prob:
        return rng.choice((BOTTOM, MaxTimes(1), MaxTimes(2), MaxTimes(mpq(1, 2))))
    b = cfg.int_bound
    return MaxTimes(mpq(rng.randint(1, b), rng.randint(1, b)))


def _maxtimes_from_int(k):
    if k < 0:
        raise WrongStructure("max-times semiring has no negative elements")
    return BOTTOM if k == 0 else MaxTimes(1)


def _make_maxtimes():
    return Structure(
        id="maxtimes-qpos",
        carrier="maxtimes",
        zero=BOTTOM,
        one=MaxTimes(1),
        capabilities=Capabilities(
            has_neg=False,
            has_inverses=True,
            strict_add_compatible=False,
            dense=True,
            shrinkable=True,
            archimedean=False,
        ),
        sampler=_maxtimes_sample,
        # the semiring sum 1 + 1 + ... + 1 is max(1, ..., 1) = 1
        from_int=_maxtimes_from_int,
        render=lambda a: a.render(),
        contains=lambda a: isinstance(a, MaxTimes),
        neg=None,
        invert=lambda a: a.inverse(),
    )


# ---------------------------------------------------------------------------
# non-negative cone F^{>=0}


def _make_nonneg(base):
    if not base.capabilities.totally_ordered or base.neg is None:
        raise UnknownStructure(f"nonneg:{base.id}")

    def sample(rng, cfg):
        x = base.sampler(rng, cfg)
        return base.abs(x)

    def contains(a):
        return base.contains(a) and not base.lt(a, base.zero)

    def invert(a):
        return base.inverse(a)

    caps = base.capabilities
    return Structure(
        id=f"nonneg:{base.id}",
        carrier=base.carrier,
        zero=base.zero,
        one=base.one,
        capabilities=Capabilities(
            has_neg=False,
            has_inverses=caps.has_inverses,
            dense=caps.dense,
            shrinkable=caps.shrinkable,
            archimedean=caps.archimedean,
        ),
        sampler=sample,
        from_int=base.from_int,
        render=base.render,
        contains=contains,
        neg=None,
        invert=invert if base.invert is not None else None,
        to_rational=base.to_rational,
        gap=base.gap,
        base=base,
        params=dict(base.params),
    )


# ---------------------------------------------------------------------------
# Q^k as an additive group


def _make_qvec(k):
    def sample(rng, cfg):
        return tuple(_rational_sample(rng, cfg) for _ in range(k))

    def add(a, b):
        return tuple(x + y for x, y in zip(a, b))

    def neg(a):
        return tuple(-x for x in a)

    def no_mul(a, b):
        raise NotApplicable("Q^k is treated as a group; it has no product")

    def render(a):
        return "[" + ", ".join(str(x) for x in a) + "]"

    return Structure(
        id=f"qvec:{k}",
        carrier="qvec",
        zero=tuple(mpq(0) for _ in range(k)),
        one=None,
        capabilities=Capabilities(
            has_one=False,
            totally_ordered=False,
            strict_order_compatible=False,
            strict_add_compatible=False,
        ),
        sampler=sample,
        from_int=lambda n: tuple(mpq(n) for _ in range(k)),
        render=render,
        contains=lambda a: isinstance(a, tuple) and len(a) == k,
        add=add,
        mul=no_mul,
        neg=neg,
        params={"dim": k},
    )


# ---------------------------------------------------------------------------
# registry


@lru_cache(maxsize=None)
def get_structure(structure_id):
    """Look up a registered structure by identifier."""
    sid = str(structure_id).strip()
    if sid == "rational":
        return _make_rational()
    if sid == "zx":
        return _make_zx()
    if sid == "maxtimes-qpos":
        return _make_maxtimes()
    if sid.startswith("z1p:"):
        try:
            p = int(sid[4:])
        except ValueError:
            raise UnknownStructure(sid) from None
        if not _is_prime(p):
            raise UnknownStructure(sid)
        return _make_z1p(p)
    if sid.startswith("nonneg:"):
        return _make_nonneg(get_structure(sid[len("nonneg:"):]))
    if sid.startswith("qvec:"):
        try:
            k = int(sid[5:])
        except ValueError:
            raise UnknownStructure(sid) from None
        if k < 1:
            raise UnknownStructure(sid)
        return _make_qvec(k)
    raise UnknownStructure(sid)


def resolve(structure):
    return structure if isinstance(structure, Structure) else get_structure(structure)


REGISTERED = ("rational", "z1p:2", "z1p:3", "zx", "maxtimes-qpos", "nonneg:rational", "nonneg:zx")


# ---------------------------------------------------------------------------
# witnesses


@dataclass(frozen=True)
class DensityWitness:
    """``produce(eps) -> (beta, gamma)`` with beta, gamma > 0 and beta + gamma < eps."""

    structure: Structure
    rule: str
    produce: Callable[[Any], tuple]

    def __call__(self, eps):
        return self.produce(eps)


@dataclass(frozen=True)
class ShrinkWitness:
    """``produce(alpha, M) -> (alpha_l, alpha_r)`` with alpha_l*M < alpha and M*alpha_r < alpha."""

    structure: Structure
    rule: str
    produce: Callable[[Any, Any], tuple]

    def __call__(self, alpha, m):
        return self.produce(alpha, m)


def _require_positive(S, *xs):
    for x in xs:
        if not S.is_positive(x):
            raise ValueError(f"witness input must be positive, got {S.render(x)}")


def density_witness_for(structure):
    S = resolve(structure)
    if not S.capabilities.dense:
        raise NotDense(f"{S.id} is not dense")
    if S.carrier == "maxtimes":
        half = MaxTimes(mpq(1, 2))

        def produce(eps):
            _require_positive(S, eps)
            b = eps * half
            return b, b

        return DensityWitness(S, "beta = gamma = eps/2 (max of equal halves)", produce)
    if S.carrier == "z1p":
        p = S.params["p"]
        d = 4 if p == 2 else p
        factor = Z1p(1, 2, 2) if p == 2 else Z1p(1, 1, p)

        def produce(eps):
            _require_positive(S, eps)
            b = eps * factor
            return b, b

        return DensityWitness(S, f"beta = gamma = eps/{d}", produce)
    two_fifths = S.div(S.from_int(2), S.from_int(5))

    def produce(eps):
        _require_positive(S, eps)
        b = S.mul(two_fifths, eps)
        return b, b

    return DensityWitness(S, "beta = gamma = 2*eps/5", produce)


def shrink_witness_for(structure):
    S = resolve(structure)
    if not S.capabilities.shrinkable:
        raise NotShrinkable(f"{S.id} is not shrinkable")
    if S.carrier == "z1p":
        p = S.params["p"]

        def produce(alpha, m):
            _require_positive(S, alpha, m)
            # minimal n with M < alpha * p^n; Archimedean so this terminates
            n = 0
            scale = S.one
            pz = S.from_int(p)
            while not S.lt(m, S.mul(alpha, scale)):
                n += 1
                scale = S.mul(scale, pz)
            a = Z1p(1, n, p)
            return a, a

        return ShrinkWitness(S, "alpha_l = alpha_r = 1/p^n, n minimal with M < alpha*p^n", produce)
    if S.invert is None:
        raise NotShrinkable(f"{S.id} has no division-based shrink witness")
    dens = density_witness_for(S)

    def produce(alpha, m):
        _require_positive(S, alpha, m)
        beta, _ = dens(alpha)
        minv = S.inverse(m)
        return S.mul(beta, minv), S.mul(minv, beta)

    return ShrinkWitness(S, "alpha_r = M^-1 beta, alpha_l = beta M^-1 with beta < alpha", produce)


def unit_check(S, a):
    """Return the inverse of ``a`` or raise NotAUnit/DivisionByZero."""
    try:
        return S.inverse(a)
    except NotApplicable as exc:
        raise NotAUnit(str(exc)) from None
