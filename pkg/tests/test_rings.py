import random
from fractions import Fraction

import pytest

from k3pairs.errors import NotDivisible
from k3pairs.rings import Monomial, TTPoly, UPoly, YPoly, _dict_mul, _kron_mul
from k3pairs.scalars import GaussianRational


def U(d):
    return UPoly(d)


def test_upoly_basic_ops():
    p = U({0: 1, 2: 1})           # 1 + u
    q = U({0: -1, 2: 1})          # u - 1
    assert p * q == U({4: 1, 0: -1})          # u^2 - 1
    assert p + q == U({2: 2})
    assert p - p == UPoly.zero()
    assert (p * 0) == UPoly.zero()
    assert 2 * p == U({0: 2, 2: 2})
    assert p ** 2 == U({0: 1, 2: 2, 4: 1})
    assert p.shift(3) == U({3: 1, 5: 1})      # multiply by u^{3/2}


def test_upoly_strings():
    assert str(U({-2: -2, 0: 3, 6: 1})) == "-2u^-1+3+u^3"
    assert str(U({1: 1})) == "u^1/2"
    assert str(U({-3: 1, 1: -1})) == "u^-3/2-u^1/2"
    assert str(UPoly.zero()) == "0"
    assert str(U({2: 1})) == "u"
    assert str(U({0: Fraction(1, 2)})) == "1/2"


def test_mul_u_integer_matches_naive():
    f = U({-2: 3, 0: -1, 5: 2, 8: 7})
    for m in (1, 2, 3, 7):
        box = U({2 * j: 1 for j in range(m)})
        assert f.mul_u_integer(m) == f * box
    assert f.mul_u_integer(0) == UPoly.zero()


def test_div_u_integer_exact_and_inexact():
    u4 = U({2 * j: 1 for j in range(4)})      # [4]
    u2 = U({0: 1, 2: 1})                      # [2]
    assert u4.div_u_integer(2) == U({0: 1, 4: 1})   # 1 + u^2
    u3 = U({0: 1, 2: 1, 4: 1})
    with pytest.raises(NotDivisible):
        u3.div_u_integer(2)
    # random roundtrips
    rng = random.Random(7)
    for _ in range(20):
        f = U({rng.randrange(-6, 12): rng.randrange(-9, 9) for _ in range(6)})
        if not f:
            continue
        m = rng.randrange(1, 6)
        assert f.mul_u_integer(m).div_u_integer(m) == f


def test_div_u_minus_one():
    um1 = U({2: 1, 0: -1})
    f = U({-2: 4, 0: -1, 2: 3, 6: -5})
    g = f * um1 * um1
    assert g.div_u_minus_one(2) == f
    with pytest.raises(NotDivisible):
        (f * um1 + UPoly.one()).div_u_minus_one()


def test_generic_divexact():
    a = U({0: 1, 2: 2, 4: 1})
    b = U({0: 1, 2: 1})
    assert a.divexact(b) == b
    with pytest.raises(NotDivisible):
        U({0: 1, 2: 1, 4: 1}).divexact(b)


def test_eval_and_derivative_at_one():
    p = U({6: 1})                              # u^3
    assert p.eval_one() == 1
    assert p.deriv_at_one(1) == 3
    assert p.deriv_at_one(2) == 6
    q = U({-4: 2, 0: 5, 2: -1})                # 2u^-2 + 5 - u
    assert q.eval_one() == 6
    assert q.deriv_at_one(1) == 2 * (-2) + 0 - 1


def test_kronecker_agrees_with_dict_mul():
    rng = random.Random(42)
    for trial in range(8):
        a = {rng.randrange(-40, 300): rng.randrange(-10 ** 9, 10 ** 9)
             for _ in range(120)}
        b = {rng.randrange(-40, 300): rng.randrange(-10 ** 9, 10 ** 9)
             for _ in range(95)}
        a = {e: v for e, v in a.items() if v}
        b = {e: v for e, v in b.items() if v}
        assert _kron_mul(a, b) == _dict_mul(a, b)


def test_kronecker_with_half_integer_grid():
    a = {1: 5, 3: -2, 7: 1}                    # odd doubled exponents
    b = {0: 2, 4: 3}
    assert _kron_mul(a, b) == _dict_mul(a, b)


def test_upoly_gaussian_coeffs():
    i = GaussianRational.i()
    p = U({0: i, 2: 1})
    assert p * p == U({0: -1, 2: 2 * i, 4: 1})
    assert str(U({2: i})) == "iu"
    assert str(U({2: 1 + i})) == "(1+i)u"


def test_ttpoly():
    h = TTPoly({(0, 0): 1, (2, 0): 1, (1, 1): 20, (0, 2): 1, (2, 2): 1})
    assert h.eval_ones() == 24
    assert h.palindromic_twist() == 2
    assert (TTPoly.mono(1, 0) * TTPoly.mono(0, 1)) == TTPoly.mono(1, 1)
    asym = TTPoly({(0, 0): 1, (2, 1): 1})
    assert asym.palindromic_twist() is None
    assert str(TTPoly.mono(1, 1, 20)) == "20*t*tb"


def test_ttpoly_from_upoly():
    p = U({2: 3, -4: 1})
    assert p.to_tt() == TTPoly({(1, 1): 3, (-2, -2): 1})
    with pytest.raises(ValueError):
        U({1: 1}).to_tt()


def test_ypoly_window():
    a = YPoly({2: 1, -2: 1}, window=3)
    b = YPoly({2: 1}, window=3)
    prod = a * b
    assert prod.c == {0: 1}                    # y^4 fell outside the window
    assert prod.window == 3
    assert YPoly({5: 9}, window=3).c == {}


def test_ypoly_mirror_and_shift():
    a = YPoly({2: 7, -1: 3}, window=None)
    assert a.mirror().c == {-2: 7, 1: 3}
    assert a.shift_y(1).c == {3: 7, 0: 3}
    assert a == YPoly({2: 7, -1: 3})
    assert YPoly({}) == 0
    assert YPoly({0: 7}) == 7


def test_monomial():
    m = Monomial(u2=2, y=1)
    assert (m * m.inverse()).trivial
    assert m ** 3 == Monomial(6, 3)
