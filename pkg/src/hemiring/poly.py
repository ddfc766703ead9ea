"""Dense univariate integer polynomials.

Coefficients are stored in ascending degree order as a tuple of Python ints;
the zero polynomial is the empty tuple.  GCDs use the primitive
pseudo-remainder sequence so every intermediate stays in Z[X].
"""

from __future__ import annotations

from math import gcd
from functools import reduce


def strip(coeffs):
    coeffs = list(coeffs)
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    if all(type(c) is int for c in coeffs):
        return tuple(coeffs)
    return tuple(int(c) for c in coeffs)


class Poly:
    """Immutable polynomial over Z."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()):
        object.__setattr__(self, "coeffs", strip(coeffs))

    def __setattr__(self, name, value):
        raise AttributeError("Poly is immutable")

    @classmethod
    def constant(cls, c):
        return cls((c,))

    @classmethod
    def monomial(cls, c, k):
        return cls((0,) * k + (c,))

    @property
    def degree(self):
        """Degree, with -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    @property
    def lc(self):
        return self.coeffs[-1] if self.coeffs else 0

    def is_zero(self):
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        if isinstance(other, int):
            other = Poly.constant(other)
        return isinstance(other, Poly) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(("Poly", self.coeffs))

    def __repr__(self):
        return f"Poly({list(self.coeffs)})"

    def __neg__(self):
        return Poly(-c for c in self.coeffs)

    def __add__(self, other):
        a, b = self.coeffs, _coerce(other).coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return Poly(out)

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-_coerce(other))

    def __rsub__(self, other):
        return _coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, int):
            return Poly(c * other for c in self.coeffs) if other else Poly()
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return Poly()
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] += x * y
        return Poly(out)

    __rmul__ = __mul__

    def __pow__(self, k):
        result = Poly.constant(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def content(self):
        return reduce(gcd, self.coeffs, 0)

    def primitive(self):
        """Return ``(content, primitive part)`` with positive leading coefficient."""
        if not self.coeffs:
            return 0, Poly()
        c = self.content()
        if self.lc < 0:
            c = -c
        return c, Poly(x // c for x in self.coeffs)

    def quo_int(self, d):
        return Poly(x // d for x in self.coeffs)

    def render(self, var="X"):
        if not self.coeffs:
            return "0"
        parts = []
        for k in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[k]
            if c == 0:
                continue
            if k == 0:
                body = str(abs(c))
            else:
                mono = var if k == 1 else f"{var}^{k}"
                body = mono if abs(c) == 1 else f"{abs(c)}*{mono}"
            if not parts:
                parts.append(("-" if c < 0 else "") + body)
            else:
                parts.append(("-" if c < 0 else "+") + body)
        return "".join(parts)


def _coerce(x):
    if isinstance(x, Poly):
        return x
    if isinstance(x, int):
        return Poly.constant(x)
    return NotImplemented


def prem(a, b):
    """Pseudo-remainder of ``a`` by nonzero ``b``: lc(b)^(da-db+1) * a mod b."""
    if b.is_zero():
        raise ZeroDivisionError("pseudo-remainder by zero polynomial")
    r = list(a.coeffs)
    db, lb = b.degree, b.lc
    bc = b.coeffs
    steps = len(r) - 1 - db + 1
    if steps <= 0:
        return a
    for _ in range(steps):
        if len(r) - 1 < db:
            r = [c * lb for c in r]
            continue
        lr = r[-1]
        shift = len(r) - 1 - db
        r = [c * lb for c in r]
        for i, c in enumerate(bc):
            r[i + shift] -= lr * c
        r.pop()
        while r and r[-1] == 0:
            r.pop()
    return Poly(r)


def exact_div(a, b):
    """Quotient ``a / b`` in Z[X]; raises ArithmeticError if ``b`` does not divide ``a``."""
    if b.is_zero():
        raise ZeroDivisionError("polynomial division by zero")
    r = list(a.coeffs)
    db, lb = b.degree, b.lc
    q = [0] * max(len(r) - db, 0)
    while r and len(r) - 1 >= db:
        lr = r[-1]
        if lr % lb:
            raise ArithmeticError("inexact polynomial division")
        t = lr // lb
        shift = len(r) - 1 - db
        q[shift] = t
        for i, c in enumerate(b.coeffs):
            r[i + shift] -= t * c
        while r and r[-1] == 0:
            r.pop()
    if r:
        raise ArithmeticError("inexact polynomial division")
    return Poly(q)


def primitive_gcd(a, b):
    """Primitive gcd of ``a`` and ``b`` (content ignored), positive leading coefficient."""
    if a.is_zero():
        return b.primitive()[1]
    if b.is_zero():
        return a.primitive()[1]
    a, b = a.primitive()[1], b.primitive()[1]
    if a.degree < b.degree:
        a, b = b, a
    if b.degree == 0:
        return Poly.constant(1)
    while not b.is_zero():
        r = prem(a, b)
        a = b
        if r.is_zero():
            break
        b = r.primitive()[1]
        if b.degree == 0:
            return Poly.constant(1)
    return a.primitive()[1]


X = Poly((0, 1))
