"""Independent oracles shared by the tests.

Rationals are checked against ``fractions.Fraction``.  Elements of Z(X)
are checked through evaluation at integer points, which is a ring map into
Q wherever the denominator does not vanish.
"""

from fractions import Fraction

from hypothesis import strategies as st

from hemiring.z1p import Z1p
from hemiring.zx import RationalFunction


def frac(x):
    """Fraction value of an mpq, int or Z1p."""
    if isinstance(x, Z1p):
        return Fraction(x.m, x.p**x.n)
    return Fraction(int(x.numerator), int(x.denominator))


def poly_at(coeffs, t):
    total = 0
    for c in reversed(coeffs):
        total = total * t + c
    return total


def zx_at(f: RationalFunction, t):
    """f(t) as a Fraction; None when t is a pole."""
    d = poly_at(f.den.coeffs, t)
    if d == 0:
        return None
    return Fraction(poly_at(f.num.coeffs, t), d)


# points large enough to sit past every root of small sampled polynomials
FAR_POINTS = (10**9 + 7, 10**12 + 39)

small_ints = st.integers(min_value=-50, max_value=50)
fractions_st = st.builds(Fraction, st.integers(-10**6, 10**6), st.integers(1, 10**6))
positive_fractions = st.builds(Fraction, st.integers(1, 10**6), st.integers(1, 10**6))
