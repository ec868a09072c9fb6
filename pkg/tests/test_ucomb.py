import pytest
from hypothesis import given, settings, strategies as st

from k3pairs.errors import Mismatch
from k3pairs.rings import UPoly
from k3pairs.ucomb import CTable, c_table, k_series, matrix_entry, \
    matrix_product_entry, sym_u_binomial, u_binomial, u_factorial, \
    u_integer, verify_ab_identity


def U(d):
    return UPoly(d)


def test_u_integer():
    assert u_integer(0) == UPoly.zero()
    assert u_integer(1) == UPoly.one()
    assert u_integer(4) == U({0: 1, 2: 1, 4: 1, 6: 1})


def test_u_factorial():
    assert u_factorial(0) == UPoly.one()
    assert u_factorial(3) == u_integer(1) * u_integer(2) * u_integer(3)


def test_u_binomial_frozen():
    assert u_binomial(4, 2) == U({0: 1, 2: 1, 4: 2, 6: 1, 8: 1})
    assert u_binomial(3, 1) == u_integer(3)
    assert u_binomial(5, 0) == UPoly.one()
    assert u_binomial(5, 5) == UPoly.one()
    assert u_binomial(3, 5) == UPoly.zero()
    assert u_binomial(-2, 1) == UPoly.zero()
    assert u_binomial(4, -1) == UPoly.zero()


@given(st.integers(0, 14), st.integers(0, 14))
@settings(max_examples=60)
def test_u_binomial_pascal(n, k):
    lhs = u_binomial(n + 1, k)
    rhs = u_binomial(n, k) + u_binomial(n, k - 1).shift(2 * (n + 1 - k))
    assert lhs == rhs


@given(st.integers(0, 12), st.integers(0, 12))
@settings(max_examples=40)
def test_u_binomial_degree_and_positivity(n, k):
    b = u_binomial(n, k)
    if k > n:
        assert not b
        return
    assert b.min_exp2() == 0
    assert b.max_exp2() == 2 * k * (n - k)
    assert all(type(v) is int and v > 0 for v in b.c.values())
    # palindromic
    top = b.max_exp2()
    assert all(b.coeff(top - e) == v for e, v in b.c.items())
    # counts all of them at u = 1
    from k3pairs.scalars import binomial
    assert b.eval_one() == binomial(n, k)


def test_sym_u_binomial():
    assert sym_u_binomial(2, 1) == U({-1: 1, 1: 1})
    # negative upper index: {-n, k} = (-1)^k {n+k-1, k}
    assert sym_u_binomial(-1, 2) == sym_u_binomial(2, 2)
    assert sym_u_binomial(-1, 3) == -sym_u_binomial(3, 3)
    assert sym_u_binomial(-3, 2) == sym_u_binomial(4, 2)
    assert sym_u_binomial(5, -1) == UPoly.zero()


def test_k_series_frozen():
    k2 = k_series(2, 4)
    assert k2[0] == UPoly.one()
    assert k2[1] == U({-1: 1, 1: 1})
    assert k2[2] == UPoly.one()
    assert k2[3] == UPoly.zero() and k2[4] == UPoly.zero()
    km1 = k_series(-1, 3)
    assert [str(c) for c in km1] == ["1", "-1", "1", "-1"]


@pytest.mark.parametrize("n", range(-3, 5))
def test_k_series_coefficients_are_sym_binomials(n):
    ks = k_series(n, 5)
    for k, c in enumerate(ks):
        assert c == sym_u_binomial(n, k), (n, k)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_k_series_inverse_pairing(n):
    cut = 6
    f = k_series(n, cut)
    g = k_series(-n, cut)
    for m in range(cut + 1):
        conv = UPoly.zero()
        for j in range(m + 1):
            conv = conv + f[j] * g[m - j]
        assert conv == (UPoly.one() if m == 0 else UPoly.zero())


def test_matrix_entries_frozen():
    assert matrix_entry("B", 0, 2) == -U({0: 1, 2: 1})          # -(1+u)
    assert matrix_entry("B", 0, 0) == UPoly.one()
    assert matrix_entry("P", 0, 2, 1) == U({0: 1, 2: 1})        # 1+u
    assert matrix_entry("A", 0, 2, 1) == U({0: 1, 2: 1})
    assert matrix_entry("A", 1, 1, 0) == UPoly.one()
    assert matrix_entry("P", 3, 3, 0) == UPoly.one()
    assert matrix_entry("P", 3, 5, 0) == UPoly.zero()
    assert matrix_entry("A", 0, 3, 1) == UPoly.zero()           # odd offset
    assert matrix_entry("P", 0, 0, 2) == UPoly.zero()           # [0] factor


def test_matrix_entries_are_laurent_with_int_coeffs():
    for n in (1, 2, 3):
        for i in range(0, 9):
            for j in range(i, 9, 2):
                p = matrix_entry("P", i, j, n)
                assert all(type(v) is int for v in p.c.values())
                b = matrix_entry("B", i, j)
                assert all(type(v) is int for v in b.c.values())


def test_product_route_matches_closed_form_small():
    for n in (0, 1, 2, 3):
        for i in range(0, 10):
            for j in range(i, 10, 2):
                want = matrix_entry("P", i, j, n)
                got = matrix_product_entry(n, i, j)
                assert got == want, (n, i, j)


def test_verify_ab_identity_small():
    checked = verify_ab_identity(2, 14)
    assert checked == 3 * sum(1 for i in range(15) for j in range(i, 15, 2))


def test_verify_ab_identity_catches_lies(monkeypatch):
    import k3pairs.ucomb as uc
    real = uc.matrix_entry.__wrapped__

    def liar(kind, i, j, n=None):
        out = real(kind, i, j, n)
        if kind == "P" and (i, j, n) == (1, 3, 1):
            return out + UPoly.one()
        return out

    monkeypatch.setattr(uc, "matrix_entry", liar)
    with pytest.raises(Mismatch):
        uc.verify_ab_identity(1, 4)


def test_c_table_frozen_levels():
    for r in (0, 1, 2):
        t1 = c_table(1, r)
        assert t1.entries == {(1, 0): UPoly.one()}
        t2 = c_table(2, r)
        assert t2.entry(2, 0) == UPoly.one()
        assert t2.entry(1, 0) == -U({2 * (1 - r): 1})            # -u^{1-r}
        assert t2.entry(1, 1) == -U({2 * (r - 1): 1})            # -u^{r-1}
        assert t2.entry(2, 1) == UPoly.zero()
        assert (1, 1) in t2.entries and (2, 1) not in t2.entries


def test_c_table_shape():
    t = c_table(3, 1)
    for (i, j) in t.entries:
        assert 1 <= i <= 3 and 0 <= j <= 3 - i
    assert t.entry(3, 0) == UPoly.one()
    blob = t.to_json()
    assert blob["n"] == 3 and blob["r"] == 1
    assert blob["entries"][0].keys() == {"i", "j", "poly"}


def test_c_table_rejects_bad_level():
    with pytest.raises(ValueError):
        c_table(0, 0)
    assert isinstance(c_table(2, 5), CTable)   # any integer r is allowed
