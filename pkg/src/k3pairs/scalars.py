"""Exact scalar arithmetic: Bernoulli numbers, secant numbers, generalized
binomials, and the field Q(i) of Gaussian rationals.

Conventions fixed here and relied on everywhere else:

* Bernoulli numbers use B_1 = -1/2 (the "first" convention), so that
  sum_{k=0}^{m} binom(m+1, k) B_k = 0 for m >= 1.
* Secant numbers e_n are the coefficients of 1/cos:
  sec t = sum_{n>=0} e_n t^n / n!   (e_0, e_2, e_4, e_6 = 1, 1, 5, 61;
  odd ones vanish).
* binomial(n, k) is the falling-factorial binomial, defined for every
  integer n and k >= 0, so e.g. binomial(-3, 2) = 6.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

__all__ = [
    "bernoulli",
    "secant_number",
    "binomial",
    "GaussianRational",
    "fraction_str",
]


@lru_cache(maxsize=None)
def bernoulli(m: int) -> Fraction:
    """m-th Bernoulli number as an exact Fraction, B_1 = -1/2."""
    if m < 0:
        raise ValueError("Bernoulli numbers are indexed by n >= 0")
    if m == 0:
        return Fraction(1)
    if m > 1 and m % 2 == 1:
        return Fraction(0)
    # sum_{k=0}^{m} binom(m+1, k) B_k = 0  solved for B_m.
    acc = Fraction(0)
    for k in range(m):
        acc += binomial(m + 1, k) * bernoulli(k)
    return -acc / binomial(m + 1, m)


@lru_cache(maxsize=None)
def secant_number(m: int) -> int:
    """Coefficient e_m in sec t = sum e_m t^m / m! (0 for odd m)."""
    if m < 0:
        raise ValueError("secant numbers are indexed by n >= 0")
    if m % 2 == 1:
        return 0
    if m == 0:
        return 1
    # cos t * sec t = 1:  sum_{j even, 0<=j<=m} (-1)^(j/2) C(m,j) e_{m-j} = 0.
    acc = 0
    for j in range(2, m + 1, 2):
        acc += (-1) ** (j // 2) * binomial(m, j) * secant_number(m - j)
    return -acc


def binomial(n: int, k: int) -> int:
    """Generalized binomial: n(n-1)...(n-k+1)/k! for any integer n, k >= 0.

    Vanishes for k < 0.  For n >= 0 it agrees with math.comb.
    """
    if k < 0:
        return 0
    num = 1
    for j in range(k):
        num *= n - j
    den = 1
    for j in range(2, k + 1):
        den *= j
    q, r = divmod(num, den)
    assert r == 0
    return q


def fraction_str(x) -> str:
    """Canonical "p/q" (or "p" when q = 1) rendering of an exact rational."""
    f = Fraction(x)
    if f.denominator == 1:
        return str(f.numerator)
    return f"{f.numerator}/{f.denominator}"


class GaussianRational:
    """An element of Q(i), stored as exact real and imaginary Fractions.

    Arithmetic mixes freely with int and Fraction.  Division is exact field
    division; dividing by zero raises ZeroDivisionError.
    """

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = Fraction(re)
        self.im = Fraction(im)

    @classmethod
    def i(cls) -> "GaussianRational":
        return cls(0, 1)

    @classmethod
    def coerce(cls, x) -> "GaussianRational":
        if isinstance(x, GaussianRational):
            return x
        return cls(x)

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __eq__(self, other):
        if isinstance(other, GaussianRational):
            return self.re == other.re and self.im == other.im
        if isinstance(other, (int, Fraction)):
            return self.im == 0 and self.re == other
        return NotImplemented

    def __hash__(self):
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __add__(self, other):
        o = GaussianRational.coerce(other)
        return GaussianRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __sub__(self, other):
        return self + (-GaussianRational.coerce(other))

    def __rsub__(self, other):
        return GaussianRational.coerce(other) + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return GaussianRational(self.re * other, self.im * other)
        if isinstance(other, GaussianRational):
            return GaussianRational(
                self.re * other.re - self.im * other.im,
                self.re * other.im + self.im * other.re,
            )
        return NotImplemented

    __rmul__ = __mul__

    def conjugate(self) -> "GaussianRational":
        return GaussianRational(self.re, -self.im)

    def __truediv__(self, other):
        o = GaussianRational.coerce(other)
        n = o.re * o.re + o.im * o.im
        if n == 0:
            raise ZeroDivisionError("division by zero in Q(i)")
        c = self * o.conjugate()
        return GaussianRational(c.re / n, c.im / n)

    def __rtruediv__(self, other):
        return GaussianRational.coerce(other) / self

    def __pow__(self, e: int):
        if e < 0:
            return GaussianRational(1) / self ** (-e)
        out = GaussianRational(1)
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def __str__(self):
        # Canonical "p/q+r/si" with explicit signs, e.g. "1/2-3i", "0", "2i".
        if not self.im:
            return fraction_str(self.re)
        im = fraction_str(abs(self.im)) + "i" if abs(self.im) != 1 else "i"
        sign = "+" if self.im > 0 else "-"
        if not self.re:
            return im if self.im > 0 else "-" + im
        return f"{fraction_str(self.re)}{sign}{im}"

    def __repr__(self):
        return f"GaussianRational({self.re!r}, {self.im!r})"
