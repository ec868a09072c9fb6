from fractions import Fraction

import pytest

from k3pairs.rings import Monomial, UPoly, YPoly, y_agree
from k3pairs.series import QSeries
from k3pairs.theta import log_phi_product, phi_bilateral, phi_product, \
    pochhammer, psi, theta_at

Y = Monomial(0, 1)
YINV = Monomial(0, -1)
U = Monomial(2, 0)
UY = Monomial(2, 1)


def ypoly(d, window=None):
    return YPoly({e: UPoly.const(v) if isinstance(v, int) else v
                  for e, v in d.items()}, window)


def test_pochhammer_euler_function():
    p = pochhammer(Monomial(), 1, 8, 0)
    assert [p.coeff(e) for e in range(8)] == [1, -1, -1, 0, 0, 1, 0, 1]


def test_pochhammer_single_factor():
    p = pochhammer(Y, 1, 2, 4)
    assert p.coeff(0) == 1
    assert p.coeff(1) == ypoly({1: -1})


def test_pochhammer_degenerate_orders():
    p = pochhammer(Y, 1, 0, 4)
    assert p.lower == 0 and p.order == 0
    assert pochhammer(Y, 1, 1, 4) == QSeries.from_dict(
        {0: YPoly({0: UPoly.one()}, 5)}, 0, 1)
    with pytest.raises(ValueError):
        pochhammer(Y, -1, 4, 4)


def test_theta_leading_columns():
    th = theta_at(Y, 6, 6)
    assert th.coeff(0) == ypoly({0: 1, 1: -1})
    assert th.coeff(1) == ypoly({2: 1, -1: -1})   # -(1-x)(1+x+1/x)


def test_theta_monomial_argument():
    th = theta_at(UY, 4, 6)
    assert th.coeff(0) == YPoly({0: UPoly.one(), 1: UPoly({2: -1})})


def test_theta_vanishes_at_one():
    th = theta_at(Y, 10, 12)
    for m in range(10):
        col = th.coeff(m)
        if not col:
            continue
        total = UPoly.zero()
        for v in col.c.values():
            total = total + v
        assert total == UPoly.zero(), m


def test_phi_bilateral_axes():
    f = phi_bilateral(Y, YINV, 6, 5)
    q0 = {e: 1 for e in range(0, 6)}
    q0.update({-e: 1 for e in range(1, 6)})
    assert f.coeff(0) == ypoly(q0)
    assert f.coeff(1) == YPoly.zero()
    assert f.coeff(2) == YPoly.zero()


def test_phi_bilateral_window_zero():
    f = phi_bilateral(Y, YINV, 3, 0)
    assert f.coeff(0) == ypoly({0: 1})
    assert f.coeff(1) == YPoly.zero()


def test_phi_bilateral_pure_u_axis():
    with pytest.raises(ValueError):
        phi_bilateral(U, YINV, 4, 3)
    f = phi_bilateral(U, YINV, 4, 3, uwin=2)
    assert f.coeff(0) == YPoly({
        0: UPoly({0: 1, 2: 1, 4: 1}),
        -1: UPoly.one(), -2: UPoly.one(), -3: UPoly.one()})


def test_phi_bilateral_rejects_trivial():
    with pytest.raises(ValueError):
        phi_bilateral(Monomial(), Y, 4, 4)


def test_psi_frozen_columns():
    f = psi(U, Y, 6, 4)
    assert f.coeff(0) == YPoly(
        {p: UPoly({2 * p: 1, 0: -1}) for p in range(1, 5)})
    assert f.coeff(1) == YPoly({0: UPoly({2: 1, -2: -1})})  # x - 1/x


def test_psi_trivial_x_vanishes():
    f = psi(Monomial(), Y, 6, 4)
    for m in range(6):
        assert f.coeff(m) == YPoly.zero()


def test_psi_needs_y_part():
    with pytest.raises(ValueError):
        psi(U, Monomial(2, 0), 4, 4)


def bilateral_unit(mono, ywin):
    out = YPoly.zero(ywin)
    k = 0
    while abs(k * mono.y) <= ywin:
        out = out + YPoly({(mono ** k).y: UPoly.u((mono ** k).u2, 1)}, ywin)
        if k > 0:
            mk = mono ** -k
            out = out + YPoly({mk.y: UPoly.u(mk.u2, 1)}, ywin)
        k += 1
    return out


@pytest.mark.parametrize("x,ym", [
    (U, Y),                       # the rank-one instance
    (Monomial(3, 0), Monomial(2, 1)),   # generic half-integer u-power
    (Monomial(-2, 2), Monomial(0, -1)),
])
def test_psi_equals_bilateral_quotient(x, ym):
    qorder, ywin = 9, 7
    lhs = psi(x, ym, qorder, ywin)
    rhs = phi_bilateral(x * ym, ym.inverse(), qorder, ywin)
    for m in range(1, qorder):
        assert lhs.coeff(m) == rhs.coeff(m), m
    # the q^0 columns are the two one-sided expansions of the same
    # rational function; they differ by exactly the bilateral unit
    diff = rhs.coeff(0) - lhs.coeff(0)
    assert diff == bilateral_unit(ym, ywin)


def test_phi_product_constant_and_first_column():
    f = phi_product(0, 0, 4, 4)
    assert f.coeff(0) == ypoly({0: 1})
    assert f.coeff(1) == ypoly({1: 2, -1: 2, 0: -4})
    g = phi_product(1, 0, 3, 4)
    assert g.coeff(1) == YPoly({
        0: UPoly({0: -2, 2: -1, -2: -1}),
        1: UPoly({0: 1, 2: 1}),
        -1: UPoly({0: 1, -2: 1})})


def test_log_phi_product_hand_columns():
    f = log_phi_product(0, 0, 3, 4)
    assert f.coeff(0) == YPoly.zero()
    assert f.coeff(1) == ypoly({1: 2, -1: 2, 0: -4})
    assert f.coeff(2) == ypoly(
        {2: 1, -2: 1, 1: 2, -1: 2, 0: -6}).map_coeffs(
            lambda v: v * Fraction(1))


def test_rank_one_bridge():
    qorder, ywin = 8, 8
    t = YPoly({0: UPoly({0: 1, 2: 1}), -1: -UPoly.one(), 1: UPoly({2: -1})})
    lhs = psi(U, Y, qorder, ywin).map_coeffs(lambda c: c * t)
    rhs = phi_product(1, 0, qorder, ywin).map_coeffs(
        lambda c: c * UPoly({0: 1, 2: -1}))
    for m in range(qorder):
        assert y_agree(lhs.coeff(m), rhs.coeff(m), ywin - 1), m


def test_theta_quotient_multiplicative():
    qorder, win, compare = 6, 18, 4
    a, b = UY, YINV
    lhs = phi_bilateral(a, b, qorder, win) \
        * theta_at(a, qorder, win) * theta_at(b, qorder, win)
    qq3 = pochhammer(Monomial(), 1, qorder, win) ** 3
    rhs = qq3 * theta_at(a * b, qorder, win)
    for m in range(qorder):
        assert y_agree(lhs.coeff(m), rhs.coeff(m), compare), m
