"""The max-times semiring G0 = (Q_{>0}, *) with an adjoined bottom element.

Addition is ``max`` and multiplication is the group product; the bottom
element plays the role of zero (absorbing, below everything).
"""

from __future__ import annotations

from functools import total_ordering

import gmpy2

from .errors import DivisionByZero, WrongStructure

mpq = gmpy2.mpq


@total_ordering
class MaxTimes:
    __slots__ = ("value",)

    def __init__(self, value=None):
        if value is not None:
            value = mpq(value)
            if value <= 0:
                raise WrongStructure(f"max-times group elements must be positive, got {value}")
        object.__setattr__(self, "value", value)

    def __setattr__(self, name, value):
        raise AttributeError("MaxTimes is immutable")

    @property
    def is_bottom(self):
        return self.value is None

    def __bool__(self):
        return self.value is not None

    def __eq__(self, other):
        if not isinstance(other, MaxTimes):
            return NotImplemented
        return self.value == other.value

    def __hash__(self):
        return hash(("G0", self.value))

    def __lt__(self, other):
        if not isinstance(other, MaxTimes):
            return NotImplemented
        if self.value is None:
            return other.value is not None
        if other.value is None:
            return False
        return self.value < other.value

    def __add__(self, other):
        if not isinstance(other, MaxTimes):
            return NotImplemented
        return self if other <= self else other

    def __mul__(self, other):
        if not isinstance(other, MaxTimes):
            return NotImplemented
        if self.value is None or other.value is None:
            return BOTTOM
        return MaxTimes(self.value * other.value)

    def __pow__(self, k):
        if self.value is None:
            if k == 0:
                return UNIT
            return BOTTOM
        return MaxTimes(self.value**k)

    def inverse(self):
        if self.value is None:
            raise DivisionByZero("bottom has no inverse")
        return MaxTimes(1 / self.value)

    def __truediv__(self, other):
        if not isinstance(other, MaxTimes):
            return NotImplemented
        return self * other.inverse()

    def canonicalize(self):
        return self

    def render(self):
        if self.value is None:
            return "0"
        return str(self.value)

    def __repr__(self):
        return f"MaxTimes({self.render()})"

    __str__ = render


BOTTOM = MaxTimes()
UNIT = MaxTimes(1)
