from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from k3pairs.scalars import GaussianRational, bernoulli, binomial, \
    fraction_str, secant_number


def test_bernoulli_small():
    assert bernoulli(0) == 1
    assert bernoulli(1) == Fraction(-1, 2)   # first-convention sign
    assert bernoulli(2) == Fraction(1, 6)
    assert bernoulli(4) == Fraction(-1, 30)
    assert bernoulli(12) == Fraction(-691, 2730)


def test_bernoulli_odd_vanish():
    for m in (3, 5, 7, 9, 11):
        assert bernoulli(m) == 0


def test_bernoulli_defining_recurrence():
    # sum_{k=0}^{m} C(m+1, k) B_k = 0 for m >= 1
    for m in range(1, 12):
        assert sum(binomial(m + 1, k) * bernoulli(k)
                   for k in range(m + 1)) == 0


def test_secant_numbers():
    assert [secant_number(n) for n in range(8)] == [1, 0, 1, 0, 5, 0, 61, 0]


def test_binomial_generalized():
    assert binomial(-3, 2) == 6
    assert binomial(5, 2) == 10
    assert binomial(3, 5) == 0
    assert binomial(7, 0) == 1
    assert binomial(0, 0) == 1
    assert binomial(-1, 4) == 1
    assert binomial(-1, 3) == -1
    assert binomial(4, -1) == 0


@given(st.integers(-30, 30), st.integers(0, 12))
def test_binomial_pascal(n, k):
    assert binomial(n + 1, k) == binomial(n, k) + binomial(n, k - 1)


def test_gaussian_arithmetic():
    i = GaussianRational.i()
    a = 1 + 2 * i
    b = 3 - i
    assert a * b == 5 + 5 * i
    assert i * i == -1
    assert (a / b) * b == a
    assert a - a == 0
    assert i ** 4 == 1
    assert i ** -1 == -i


def test_gaussian_strings():
    i = GaussianRational.i()
    assert str(GaussianRational(Fraction(1, 2), -3)) == "1/2-3i"
    assert str(i) == "i"
    assert str(-i) == "-i"
    assert str(2 * i) == "2i"
    assert str(GaussianRational(0)) == "0"
    assert str(GaussianRational(5)) == "5"
    assert str(GaussianRational(Fraction(1, 2), 1)) == "1/2+i"
    assert str(GaussianRational(Fraction(-2, 3), Fraction(1, 5))) \
        == "-2/3+1/5i"


def test_fraction_str():
    assert fraction_str(Fraction(3, 4)) == "3/4"
    assert fraction_str(Fraction(-3, 1)) == "-3"
    assert fraction_str(7) == "7"


small_rat = st.fractions(min_value=-50, max_value=50, max_denominator=9)


@given(small_rat, small_rat, small_rat, small_rat)
def test_gaussian_field_laws(p, q, r, s):
    a = GaussianRational(p, q)
    b = GaussianRational(r, s)
    c = GaussianRational(q, r)
    assert (a + b) * c == a * c + b * c
    assert a * b == b * a
    if b:
        assert (a / b) * b == a


def test_gaussian_division_by_zero():
    with pytest.raises(ZeroDivisionError):
        GaussianRational(1) / GaussianRational(0)
