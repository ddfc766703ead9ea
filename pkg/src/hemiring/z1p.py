"""The ring Z[1/p] of rationals m/p^n."""

from __future__ import annotations

from functools import total_ordering

import gmpy2

from .errors import DivisionByZero, NotAUnit, WrongStructure

mpq = gmpy2.mpq
_MPZ = type(gmpy2.mpz(0))
_MPQ = type(gmpy2.mpq(0))


def _normalize(m, n, p):
    m = int(m)
    if m == 0:
        return 0, 0
    if n > 0 and m % p == 0:
        stripped, k = gmpy2.remove(m, p)
        if k <= n:
            return int(stripped), n - int(k)
        return m // p**n, 0
    return m, n


@total_ordering
class Z1p:
    """Value ``m / p**n`` with ``p`` not dividing ``m`` unless ``n == 0``."""

    __slots__ = ("m", "n", "p")

    def __init__(self, m, n=0, p=2):
        if n < 0:
            m, n = int(m) * p ** (-n), 0
        m, n = _normalize(m, n, p)
        object.__setattr__(self, "m", m)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "p", p)

    def __setattr__(self, name, value):
        raise AttributeError("Z1p is immutable")

    @classmethod
    def from_rational(cls, q, p):
        """Exact conversion from a rational; raises WrongStructure if the denominator is not a power of p."""
        q = mpq(q)
        den = int(q.denominator)
        if den == 1:
            return cls(int(q.numerator), 0, p)
        rest, k = gmpy2.remove(den, p)
        if rest != 1:
            raise WrongStructure(f"{q} is not in Z[1/{p}]")
        return cls(int(q.numerator), int(k), p)

    def canonicalize(self):
        return Z1p(self.m, self.n, self.p)

    def to_mpq(self):
        return mpq(self.m, self.p**self.n) if self.n else mpq(self.m)

    def _coerce(self, other):
        if isinstance(other, Z1p):
            if other.p != self.p:
                raise WrongStructure(f"mixing Z[1/{self.p}] and Z[1/{other.p}]")
            return other
        if isinstance(other, (int, _MPZ)):
            return Z1p(int(other), 0, self.p)
        if isinstance(other, _MPQ):
            return Z1p.from_rational(other, self.p)
        return NotImplemented

    def __eq__(self, other):
        if isinstance(other, _MPQ):
            return self.to_mpq() == other
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self.m == o.m and self.n == o.n

    def __hash__(self):
        return hash(self.to_mpq()) if self.n < 64 else hash((self.m, self.n, self.p))

    def __lt__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        if self.n == o.n:
            return self.m < o.m
        if self.n < o.n:
            return self.m * self.p ** (o.n - self.n) < o.m
        return self.m < o.m * self.p ** (self.n - o.n)

    def __bool__(self):
        return self.m != 0

    def __neg__(self):
        return Z1p(-self.m, self.n, self.p)

    def __abs__(self):
        return -self if self.m < 0 else self

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        p = self.p
        if self.n == o.n:
            return Z1p(self.m + o.m, self.n, p)
        if self.n < o.n:
            return Z1p(self.m * p ** (o.n - self.n) + o.m, o.n, p)
        return Z1p(self.m + o.m * p ** (self.n - o.n), self.n, p)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return Z1p(self.m * o.m, self.n + o.n, self.p)

    __rmul__ = __mul__

    def __pow__(self, k):
        if k < 0:
            return self.inverse() ** (-k)
        return Z1p(self.m**k, self.n * k, self.p)

    def is_unit(self):
        if self.m == 0:
            return False
        rest, _ = gmpy2.remove(abs(self.m), self.p)
        return rest == 1

    def inverse(self):
        if self.m == 0:
            raise DivisionByZero("inverse of zero in Z[1/p]")
        rest, k = gmpy2.remove(abs(self.m), self.p)
        if rest != 1:
            raise NotAUnit(f"{self.render()} is not a unit of Z[1/{self.p}]")
        sign = 1 if self.m > 0 else -1
        return Z1p(sign * self.p**self.n, int(k), self.p)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return o * self.inverse()

    def render(self):
        if self.n == 0:
            return str(self.m)
        return f"{self.m}/{self.p**self.n}"

    def __repr__(self):
        return f"Z1p(m={self.m}, n={self.n}, p={self.p})"

    __str__ = render
