"""Seeded law checking for ordered hemirings."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Any

from .errors import NotApplicable
from .structures import DEFAULT_SAMPLING, resolve


@dataclass(frozen=True)
class LawFailure:
    law: str
    inputs: tuple
    expected: str
    observed: str

    def as_dict(self):
        return {"law": self.law, "inputs": list(self.inputs), "expected": self.expected, "observed": self.observed}


@dataclass
class LawReport:
    """Outcome of a sampled law check; passes iff ``failures`` is empty."""

    law_name: str
    samples_tested: int
    failures: list = field(default_factory=list)
    seed: Any = None
    laws: tuple = ()
    precondition_failures: list = field(default_factory=list)
    details: dict = field(default_factory=dict)

    @property
    def passed(self):
        return not self.failures

    def as_dict(self):
        return {
            "law": self.law_name,
            "samples": self.samples_tested,
            "seed": self.seed,
            "laws": list(self.laws),
            "pass": self.passed,
            "failures": [f.as_dict() for f in self.failures],
            "precondition_failures": list(self.precondition_failures),
            "details": dict(self.details),
        }


def draw_samples(S, count, seed, arity=3, config=DEFAULT_SAMPLING):
    """Generate ``count`` tuples sequentially from ``seed`` (so later checks may run in any order)."""
    rng = random.Random(seed)
    return [tuple(S.sample(rng, config) for _ in range(arity)) for _ in range(count)]


def _ordered(S, a, b):
    return (a, b) if S.le(a, b) else (b, a)


def check_hemiring_laws(structure, sample_count=1000, seed=42, config=DEFAULT_SAMPLING):
    """Check the ordered-hemiring axioms (plus ring/semiring extras the capabilities claim)."""
    S = resolve(structure)
    caps = S.capabilities
    zero, one = S.zero, S.one
    add, mul = S.add, S.mul
    failures = []
    names = [
        "add_associative",
        "add_commutative",
        "add_identity",
        "mul_associative",
        "distributive_left",
        "distributive_right",
        "zero_absorbing",
    ]
    if caps.has_one:
        names.append("mul_identity")
    if caps.has_neg:
        names.append("add_inverse")
    if caps.commutative:
        names.append("mul_commutative")
    if caps.totally_ordered:
        names += ["order_transitive", "order_add_compatible", "order_mul_compatible"]
        if caps.strict_add_compatible:
            names.append("strict_add_compatible")
        if caps.strict_order_compatible:
            names.append("strict_mul_compatible")
    r = S.render

    def fail(law, inputs, expected, observed):
        failures.append(LawFailure(law, tuple(r(x) for x in inputs), expected, observed))

    def eq(law, inputs, lhs, rhs, text):
        if lhs != rhs:
            fail(law, inputs, text, f"{r(lhs)} != {r(rhs)}")

    for a, b, c in draw_samples(S, sample_count, seed, 3, config):
        abc = (a, b, c)
        eq("add_associative", abc, add(add(a, b), c), add(a, add(b, c)), "(a+b)+c = a+(b+c)")
        eq("add_commutative", abc, add(a, b), add(b, a), "a+b = b+a")
        eq("add_identity", abc, add(a, zero), a, "a+0 = a")
        eq("add_identity", abc, add(zero, a), a, "0+a = a")
        eq("mul_associative", abc, mul(mul(a, b), c), mul(a, mul(b, c)), "(ab)c = a(bc)")
        eq("distributive_left", abc, mul(a, add(b, c)), add(mul(a, b), mul(a, c)), "a(b+c) = ab+ac")
        eq("distributive_right", abc, mul(add(a, b), c), add(mul(a, c), mul(b, c)), "(a+b)c = ac+bc")
        eq("zero_absorbing", abc, mul(zero, a), zero, "0a = 0")
        eq("zero_absorbing", abc, mul(a, zero), zero, "a0 = 0")
        if caps.has_one:
            eq("mul_identity", abc, mul(one, a), a, "1a = a")
            eq("mul_identity", abc, mul(a, one), a, "a1 = a")
        if caps.has_neg:
            eq("add_inverse", abc, add(a, S.neg(a)), zero, "a+(-a) = 0")
        if caps.commutative:
            eq("mul_commutative", abc, mul(a, b), mul(b, a), "ab = ba")
        if not caps.totally_ordered:
            continue
        lo, mid, hi = sorted(abc, key=_Key(S))
        if not S.le(lo, hi):
            fail("order_transitive", (lo, mid, hi), "lo <= mid <= hi implies lo <= hi", "lo > hi")
        x, y = _ordered(S, a, b)
        if not S.le(add(x, c), add(y, c)):
            fail("order_add_compatible", (x, y, c), "x <= y implies x+c <= y+c", "x+c > y+c")
        cc = S.abs(c)
        if not (S.le(mul(x, cc), mul(y, cc)) and S.le(mul(cc, x), mul(cc, y))):
            fail("order_mul_compatible", (x, y, cc), "x <= y, 0 <= c implies xc <= yc, cx <= cy", "violated")
        if S.lt(x, y):
            if caps.strict_add_compatible and not S.lt(add(x, c), add(y, c)):
                fail("strict_add_compatible", (x, y, c), "x < y implies x+c < y+c", "not strict")
            if caps.strict_order_compatible and S.lt(zero, cc):
                if not (S.lt(mul(x, cc), mul(y, cc)) and S.lt(mul(cc, x), mul(cc, y))):
                    fail("strict_mul_compatible", (x, y, cc), "x < y, 0 < c implies xc < yc, cx < cy", "not strict")
    return LawReport("hemiring", sample_count, failures, seed, tuple(names))


class _Key:
    """Sort key adapter for a structure's three-way compare."""

    def __init__(self, S):
        self.S = S

    def __call__(self, x):
        return _Wrapped(self.S, x)


class _Wrapped:
    __slots__ = ("S", "x")

    def __init__(self, S, x):
        self.S, self.x = S, x

    def __lt__(self, other):
        return self.S.lt(self.x, other.x)


def check_entire(structure, sample_count=1000, seed=42, config=DEFAULT_SAMPLING):
    """Check that no sampled pair of nonzero elements multiplies to zero."""
    S = resolve(structure)
    caps = S.capabilities
    if not (caps.totally_ordered and caps.strict_order_compatible):
        raise NotApplicable(f"{S.id} is not totally ordered with strict compatibility")
    rng = random.Random(seed)
    pairs = [(S.sample(rng, config, nonzero=True), S.sample(rng, config, nonzero=True)) for _ in range(sample_count)]
    failures = []
    for a, b in pairs:
        if S.mul(a, b) == S.zero:
            failures.append(LawFailure("entire", (S.render(a), S.render(b)), "ab != 0", "ab = 0"))
    return LawReport("entire", sample_count, failures, seed, ("entire",))
