"""Rigorous rational enclosures for terms too large to hold exactly.

A term like ``(1/2)^(2^80)`` is a perfectly good rational but has more bits
than any machine can store.  An :class:`Enclosure` records an exact centre
``c`` and a dyadic radius ``2^e`` (``e`` may be astronomically negative) and
guarantees the true value lies in ``[c - 2^e, c + 2^e]``.  Only order
questions with a definite answer are answered; anything else raises
:class:`Inconclusive`, which validators treat as a violation.

Enclosures only arise for structures embedded in Q (rationals and Z[1/p]).
"""

from __future__ import annotations

import gmpy2

from .errors import DivisionByZero, PrecisionBudgetExceeded

mpq = gmpy2.mpq
_MPQ = type(mpq(0))
_MPZ = type(gmpy2.mpz(0))

# exact powers whose result would exceed this many bits become enclosures
BIT_BUDGET = 1 << 14


class Inconclusive(PrecisionBudgetExceeded):
    """An order question about an enclosure has no definite answer."""


def floor_log2(q):
    """Largest k with 2^k <= q, for a positive rational q."""
    q = mpq(q)
    a, b = int(q.numerator), int(q.denominator)
    if a <= 0:
        raise ValueError("floor_log2 needs a positive argument")
    k = a.bit_length() - b.bit_length()
    ok = a >= (b << k) if k >= 0 else (a << -k) >= b
    return k if ok else k - 1


def _sign(q):
    return (q > 0) - (q < 0)


def _as_mpq(x):
    if isinstance(x, (_MPQ, int, _MPZ)):
        return mpq(x)
    to = getattr(x, "to_mpq", None)
    if to is not None:
        return to()
    return None


class Enclosure:
    """Value in ``[centre - 2^rad_exp, centre + 2^rad_exp]``.

    ``sign`` is +1 or -1 when the sign of the value is known (possibly from
    how it was built, not just from the interval), else 0.
    """

    __slots__ = ("centre", "rad_exp", "sign")
    __hash__ = None

    def __init__(self, centre, rad_exp, sign=0):
        centre = mpq(centre)
        self.centre = centre
        self.rad_exp = int(rad_exp)
        if centre != 0 and floor_log2(abs(centre)) > self.rad_exp:
            sign = _sign(centre)
        self.sign = sign

    # construction ----------------------------------------------------------
    @classmethod
    def small_power(cls, base, k):
        """Enclose ``base^k`` for a rational ``|base| < 1`` and huge ``k``."""
        q = mpq(base)
        if q == 0:
            return mpq(0) if k else mpq(1)
        a = abs(q)
        if a >= 1:
            if a == 1:
                return mpq(_sign(q) ** k)
            raise PrecisionBudgetExceeded(f"{q}^{k} is too large to evaluate")
        # j minimal with a^j <= 1/2, so a^k <= (1/2)^(k // j)
        j, acc = 1, a
        while acc > mpq(1, 2):
            j += 1
            acc *= a
        sign = 1 if q > 0 or k % 2 == 0 else -1
        return cls(0, -(k // j), sign)

    # queries ----------------------------------------------------------------
    def _upper_log2(self):
        """u with |centre| < 2^u, or None when the centre is zero."""
        if self.centre == 0:
            return None
        return floor_log2(abs(self.centre)) + 1

    def definite_sign(self):
        """+1/-1 when the value's sign is settled, else raise Inconclusive."""
        if self.sign:
            return self.sign
        raise Inconclusive(f"sign of {self.render()} is undetermined")

    # arithmetic ---------------------------------------------------------------
    def __neg__(self):
        return Enclosure(-self.centre, self.rad_exp, -self.sign)

    def __pos__(self):
        return self

    def __abs__(self):
        if self.sign < 0:
            return -self
        if self.sign > 0:
            return self
        return Enclosure(abs(self.centre), self.rad_exp, 0)

    def __add__(self, other):
        if isinstance(other, Enclosure):
            sign = self.sign if self.sign == other.sign else 0
            return Enclosure(self.centre + other.centre, max(self.rad_exp, other.rad_exp) + 1, sign)
        q = _as_mpq(other)
        if q is None:
            return NotImplemented
        s = _sign(q)
        sign = self.sign if (s == 0 or s == self.sign) else 0
        return Enclosure(self.centre + q, self.rad_exp, sign)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, Enclosure):
            return self + (-other)
        q = _as_mpq(other)
        if q is None:
            return NotImplemented
        return self + (-q)

    def __rsub__(self, other):
        q = _as_mpq(other)
        if q is None:
            return NotImplemented
        return (-self) + q

    def __mul__(self, other):
        if isinstance(other, Enclosure):
            exps = [self.rad_exp + other.rad_exp]
            ua, ub = self._upper_log2(), other._upper_log2()
            if ua is not None:
                exps.append(ua + other.rad_exp)
            if ub is not None:
                exps.append(ub + self.rad_exp)
            return Enclosure(self.centre * other.centre, max(exps) + 2, self.sign * other.sign)
        q = _as_mpq(other)
        if q is None:
            return NotImplemented
        if q == 0:
            return mpq(0)
        return Enclosure(self.centre * q, self.rad_exp + floor_log2(abs(q)) + 1, self.sign * _sign(q))

    __rmul__ = __mul__

    def inverse(self):
        c = self.centre
        if c == 0 or floor_log2(abs(c)) - 1 < self.rad_exp:
            if c == 0 and self.sign == 0:
                raise DivisionByZero("enclosure may contain zero")
            raise PrecisionBudgetExceeded(f"cannot invert {self.render()} at this precision")
        return Enclosure(1 / c, self.rad_exp + 1 - 2 * floor_log2(abs(c)), self.sign)

    def __truediv__(self, other):
        if isinstance(other, Enclosure):
            return self * other.inverse()
        q = _as_mpq(other)
        if q is None:
            return NotImplemented
        if q == 0:
            raise DivisionByZero("division by zero")
        return self * (1 / q)

    def __rtruediv__(self, other):
        q = _as_mpq(other)
        if q is None:
            return NotImplemented
        return self.inverse() * q

    def __pow__(self, k):
        if k < 0:
            return self.inverse() ** (-k)
        if k > 64:
            raise PrecisionBudgetExceeded("large powers of an enclosure are not supported")
        result, base = mpq(1), self
        while k:
            if k & 1:
                result = base * result
            base = base * base
            k >>= 1
        return result

    # order ------------------------------------------------------------------
    def _positive(self):
        """Decide ``self > 0``."""
        if self.sign:
            return self.sign > 0
        c = self.centre
        if c != 0 and floor_log2(abs(c)) > self.rad_exp:
            return c > 0
        raise Inconclusive(f"cannot decide the sign of {self.render()}")

    def _nonneg(self):
        if self.sign:
            return self.sign > 0
        c = self.centre
        if c != 0 and floor_log2(abs(c)) >= self.rad_exp:
            return c > 0
        raise Inconclusive(f"cannot decide the sign of {self.render()}")

    def _diff(self, other):
        if isinstance(other, Enclosure):
            return self - other
        q = _as_mpq(other)
        if q is None:
            return None
        return self - q

    def __lt__(self, other):
        d = self._diff(other)
        if d is None:
            return NotImplemented
        return (-d)._positive() if isinstance(d, Enclosure) else d < 0

    def __gt__(self, other):
        d = self._diff(other)
        if d is None:
            return NotImplemented
        return d._positive() if isinstance(d, Enclosure) else d > 0

    def __le__(self, other):
        d = self._diff(other)
        if d is None:
            return NotImplemented
        return (-d)._nonneg() if isinstance(d, Enclosure) else d <= 0

    def __ge__(self, other):
        d = self._diff(other)
        if d is None:
            return NotImplemented
        return d._nonneg() if isinstance(d, Enclosure) else d >= 0

    def __eq__(self, other):
        d = self._diff(other)
        if d is None:
            return NotImplemented
        if isinstance(d, Enclosure):
            if d.sign:
                return False
            raise Inconclusive(f"cannot decide equality for {self.render()}")
        return d == 0

    def __ne__(self, other):
        eq = self.__eq__(other)
        return eq if eq is NotImplemented else not eq

    def __bool__(self):
        return self != 0

    # output -----------------------------------------------------------------
    def render(self):
        return f"[{self.centre} +/- 2^{_render_exponent(self.rad_exp)}]"

    __str__ = render

    def __repr__(self):
        return f"Enclosure({self.centre}, {self.rad_exp}, sign={self.sign})"


def _render_exponent(e):
    # exponents like -2^(10^7) are too long to print in full
    if e.bit_length() <= 64:
        return str(e)
    sign = "-" if e < 0 else ""
    return f"{sign}(~2^{abs(e).bit_length() - 1})"


def is_enclosure(x):
    return isinstance(x, Enclosure)


def exact_power(base, k, budget=None):
    """``base^k`` for a rational base, switching to an enclosure past the bit budget."""
    budget = BIT_BUDGET if budget is None else budget
    if isinstance(base, Enclosure):
        return base**k
    q = mpq(base)
    if q == 0 or abs(q) == 1 or k <= 1:
        return q**k
    size = max(int(q.numerator).bit_length(), int(q.denominator).bit_length())
    if size * k <= budget:
        return q**k
    return Enclosure.small_power(q, k)
