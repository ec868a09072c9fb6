"""Oracles for the Eisenstein layer and the v-expansion pipeline.

Frozen values below come from independent derivations: divisor sums by
brute enumeration, the Bernoulli kernel against a hand-expanded cosine
series, the rank-one and rank-two boundary columns against elementary
exponential cross-multiplication, and the closed forms for the
log-product coefficients against direct substitution y -> exp(iv).
"""

import json
from fractions import Fraction
from math import factorial, gcd

import pytest
from hypothesis import assume, given, strategies as st

from k3pairs.errors import Mismatch, NoSolution, UnsupportedRank, \
    ValidationFailure
from k3pairs.modular import (
    EisensteinBasis, b_series, eisenstein_even, eisenstein_odd_q2, fit_in_R,
    fit_v_coefficient, logphi_sigma_check, mpt_check, psi_kls,
    psi_kls_derivative, psi_kls_sym, sigma_series,
    v_expansion_symmetry_report, v_partition_series, verify_psi_vs_log)
from k3pairs.partition import euler_g
from k3pairs.rings import UPoly
from k3pairs.scalars import GaussianRational
from k3pairs.series import QSeries, v_substitute_qmajor
from k3pairs.theta import log_phi_product

I = GaussianRational.i()


def _exp_iv(mult: int, vorder: int) -> QSeries:
    """exp(i * mult * v) straight from the exponential series."""
    cells = [I ** m * Fraction(mult ** m, factorial(m)) for m in range(vorder)]
    return QSeries(0, cells, "v")


# ---------------------------------------------------------------------------
# divisor sums and Eisenstein generators

def test_sigma_series_frozen():
    s1 = sigma_series(1, 7)
    assert [s1.coeff(n) for n in range(1, 7)] == [1, 3, 4, 7, 6, 12]
    assert sigma_series(0, 7).coeff(6) == 4
    assert sigma_series(9, 2).coeff(1) == 1
    with pytest.raises(ValueError):
        sigma_series(-1, 5)


def test_sigma_series_matches_divisor_enumeration():
    for w in range(4):
        ser = sigma_series(w, 31)
        for n in range(1, 31):
            assert ser.coeff(n) == sum(
                d ** w for d in range(1, n + 1) if n % d == 0)


@given(st.integers(1, 50), st.integers(1, 50), st.integers(0, 3))
def test_sigma_multiplicative_on_coprime_parts(m, n, w):
    assume(gcd(m, n) == 1)
    ser = sigma_series(w, m * n + 1)
    assert ser.coeff(m * n) == ser.coeff(m) * ser.coeff(n)


def test_eisenstein_even_frozen_rows():
    e2 = eisenstein_even(2, 5)
    assert [e2.coeff(n) for n in range(5)] == [1, -24, -72, -96, -168]
    e4 = eisenstein_even(4, 4)
    assert [e4.coeff(n) for n in range(4)] == [1, 240, 2160, 6720]
    assert eisenstein_even(6, 2).coeff(1) == -504
    for w in (2, 4, 6, 8, 10, 12):
        assert eisenstein_even(w, 2).coeff(0) == 1


def test_eisenstein_even_rejects_bad_weight():
    for w in (0, -2, 3):
        with pytest.raises(ValueError):
            eisenstein_even(w, 4)


def test_eisenstein_odd_frozen_rows():
    e3 = eisenstein_odd_q2(3, 5)
    assert [e3.coeff(n) for n in range(5)] == [1, -4, -12, -16, -28]
    e5 = eisenstein_odd_q2(5, 4)
    assert [e5.coeff(n) for n in range(4)] == \
        [1, Fraction(4, 5), Fraction(36, 5), Fraction(112, 5)]
    # weight seven runs through the e_6 = 61 secant constant
    assert eisenstein_odd_q2(7, 2).coeff(1) == Fraction(-4, 61)


def test_eisenstein_odd_rejects_bad_weight():
    for w in (1, 2, 4, -3):
        with pytest.raises(ValueError):
            eisenstein_odd_q2(w, 4)


# ---------------------------------------------------------------------------
# the Bernoulli kernel

def test_b_series_frozen():
    b = b_series(5)
    assert [b.coeff(m) for m in range(5)] == \
        [1, 0, Fraction(1, 12), 0, Fraction(1, 240)]


def test_b_series_inverts_the_cosine_kernel():
    # b_series * (2 - 2 cos v) / v^2 == 1, with the cosine side expanded
    # by hand: coefficient of v^j is 2 (-1)^(j/2) / (j+2)! at even j.
    vorder = 13
    b = b_series(vorder)
    kernel = QSeries(0, [Fraction(2 * (-1) ** (j // 2), factorial(j + 2))
                         if j % 2 == 0 else 0 for j in range(vorder)], "v")
    assert b * kernel == QSeries.one(vorder, "v")
    assert all(b.coeff(m) == 0 for m in range(1, vorder, 2))


# ---------------------------------------------------------------------------
# closed forms for the log-product coefficients

def test_psi_u1_s0_and_odd_s_vanish():
    for (k, l) in ((0, 0), (1, 0), (2, 1)):
        for s in (0, 1, 3):
            z = psi_kls(k, l, s, 8)
            assert all(z.coeff(n) == 0 for n in range(1, 8)), (k, l, s)


def test_psi_u1_even_s_frozen():
    p2 = psi_kls(1, 0, 2, 5)
    assert [p2.coeff(n) for n in range(1, 5)] == [-2, -6, -8, -14]
    p4 = psi_kls(2, 1, 4, 4)
    assert [p4.coeff(n) for n in range(1, 4)] == \
        [Fraction(1, 6), Fraction(3, 2), Fraction(14, 3)]
    # the u = 1 shadow forgets (k, l) entirely
    assert psi_kls(3, 2, 2, 6) == psi_kls(0, 0, 2, 6)


def test_psi_sym_hand_columns():
    s2 = psi_kls_sym(1, 0, 2, 3)
    assert s2.coeff(1) == UPoly({2: Fraction(-1, 2), -2: Fraction(-1, 2),
                                 0: -1})
    assert s2.coeff(2) == UPoly({4: -1, -4: -1, 2: Fraction(-1, 2),
                                 -2: Fraction(-1, 2), 0: -3})
    s0 = psi_kls_sym(1, 1, 0, 3)
    assert s0.coeff(1) == UPoly({4: 1, -4: 1, 0: -2})
    assert s0.coeff(2) == UPoly({8: Fraction(1, 2), -8: Fraction(1, 2),
                                 4: 1, -4: 1, 0: -3})


def test_psi_sym_vanishes_for_l_zero_s_zero():
    z = psi_kls_sym(4, 0, 0, 7)
    assert all(not z.coeff(n) for n in range(1, 7))


def test_psi_derivative_hand_values():
    # d^2/du^2 of u^2 + u^-2 - 2 at u = 1 is 8, and the q^n cell scales
    # like 8 sigma_1(n)
    d = psi_kls_derivative(1, 1, 0, 2, 5)
    assert [d.coeff(n) for n in range(1, 5)] == [8, 24, 32, 56]
    z = psi_kls_derivative(1, 0, 2, 1, 6)
    assert all(z.coeff(n) == 0 for n in range(1, 6))


@pytest.mark.parametrize("k,l", [(1, 0), (1, 1), (2, 1), (0, 2)])
def test_psi_derivative_matches_symbolic_columns(k, l):
    qorder = 6
    for s in range(5):
        sym = psi_kls_sym(k, l, s, qorder)
        for t in range(4):
            closed = psi_kls_derivative(k, l, s, t, qorder)
            for n in range(1, qorder):
                cell = sym.coeff(n)
                want = cell.deriv_at_one(t) if isinstance(cell, UPoly) \
                    else (cell if t == 0 else 0)
                assert closed.coeff(n) == want, (s, t, n)


def test_verify_psi_vs_log_small_grid():
    rep = verify_psi_vs_log(1, 0, 8, 6)
    assert rep["ok"] and rep["checks"] == 6 * 5
    # (0, 0) exercises the scalar-cell path: no u survives anywhere
    assert verify_psi_vs_log(0, 0, 6, 5)["ok"]
    assert verify_psi_vs_log(2, 1, 6, 5, tmax=2)["ok"]


def test_verify_psi_vs_log_reports_location(monkeypatch):
    import k3pairs.modular as modular
    real = modular.psi_kls_sym

    def lying(k, l, s, qorder):
        out = real(k, l, s, qorder)
        if s == 2:
            bump = QSeries(1, [UPoly.const(1)] + [0] * (qorder - 2), "q")
            out = out + bump
        return out

    monkeypatch.setattr(modular, "psi_kls_sym", lying)
    with pytest.raises(Mismatch) as e:
        modular.verify_psi_vs_log(1, 0, 5, 4)
    assert e.value.location["v"] == 2 and "q" in e.value.location


# ---------------------------------------------------------------------------
# the v-expansion pipeline

def test_v_partition_rank_one_q0_column():
    f = v_partition_series(1, 0, 3, 6)
    got = [f.coeff(s).coeff(0) for s in range(6)]
    assert got == [-1, 0, Fraction(-1, 12), 0, Fraction(-1, 240), 0]


def test_v_partition_rank_two_boundary_q0_columns():
    f0 = v_partition_series(2, 0, 3, 4)
    got = [f0.coeff(s).coeff(0) for s in range(-1, 4)]
    assert got == [-I, Fraction(1, 2), 0, Fraction(1, 24),
                   I * Fraction(1, 240)]
    f2 = v_partition_series(2, 2, 3, 4)
    got = [f2.coeff(s).coeff(0) for s in range(-1, 4)]
    assert got == [I, Fraction(1, 2), 0, Fraction(1, 24),
                   I * Fraction(-1, 240)]


def test_v_partition_q0_satisfies_cross_multiplied_form():
    # (q^0 column of v^2 g) * (1 - e^{iv})^{n+1} == v^2 e^{inv}: only
    # elementary exponential series on the right, no Bernoulli numbers.
    vorder = 9
    for n in range(1, 5):
        w = v_partition_series(n, 0, 1, vorder)
        col = QSeries(w.lower, [w.coeff(s).coeff(0)
                                for s in range(w.lower, vorder)], "v")
        cross = QSeries.one(vorder, "v") - _exp_iv(1, vorder)
        assert (col * cross ** (n + 1)).agrees(_exp_iv(n, vorder).shift(2)), n


def test_v_partition_interior_rank_has_no_q0_column():
    for (n, r) in ((2, 1), (3, 1), (3, 2)):
        f = v_partition_series(n, r, 3, 5)
        assert all(f.coeff(s).coeff(0) == 0 for s in range(f.lower, 5))


def test_v_partition_rank_two_q2_cells():
    # euler column at q^2 for (2, 0) is the single cell 3y
    f = v_partition_series(2, 0, 3, 5)
    got = [f.coeff(s).coeff(2) for s in range(-1, 5)]
    assert got == [0, 0, 0, 3, 3 * I, Fraction(-3, 2)]


@pytest.mark.parametrize("n,r", [(1, 0), (2, 0), (2, 1), (3, 2)])
def test_v_partition_columns_match_direct_substitution(n, r):
    qorder, vorder = 6, 7
    f = v_partition_series(n, r, qorder, vorder)
    sub = v_substitute_qmajor(euler_g(n, r, qorder, qorder), vorder - 2)
    for s in range(f.lower, vorder):
        col = f.coeff(s)
        for m in range(1, qorder):
            want = sub.coeff(s - 2).coeff(m) if s >= 2 else 0
            assert col.coeff(m) == want, (s, m)


def test_v_partition_validates_input():
    with pytest.raises(UnsupportedRank):
        v_partition_series(2, 3, 4, 4)
    with pytest.raises(ValueError):
        v_partition_series(1, 0, 0, 4)


def test_rank_two_interior_odd_v_powers_vanish():
    f = v_partition_series(2, 1, 8, 6)
    for s in (1, 3, 5):
        col = f.coeff(s)
        assert all(col.coeff(m) == 0 for m in range(8)), s


@pytest.mark.parametrize("n,r", [(n, r) for n in range(1, 4)
                                 for r in range(n + 1)])
def test_v_expansion_even_and_real_low_rank(n, r):
    assert v_expansion_symmetry_report(n, r, 5, 6) == []


# ---------------------------------------------------------------------------
# the two product-side consistency checks

def test_mpt_check_passes_and_v2_column():
    assert mpt_check(8, 6)["ok"]
    lhs = -v_partition_series(1, 0, 8, 4)
    assert lhs.coeff(2) == eisenstein_even(2, 8) * Fraction(1, 12)


def test_logphi_sigma_check_and_v2_column():
    assert logphi_sigma_check(8, 7)["ok"]
    direct = v_substitute_qmajor(log_phi_product(0, 0, 6, 5), 5)
    col = direct.coeff(2)
    assert [col.coeff(n) for n in range(1, 6)] == [-2, -6, -8, -14, -12]
    assert all(not direct.coeff(s).coeff(0) for s in range(5))
    for s in (1, 3):
        assert all(direct.coeff(s).coeff(n) == 0 for n in range(6))


# ---------------------------------------------------------------------------
# the Eisenstein monomial basis and the exact fitter

def test_basis_enumeration_and_names():
    b = EisensteinBasis(6, 8)
    names = [nm for nm, _, _ in b.elements]
    assert names[0] == "1"
    assert len(names) == len(set(names)) == 11
    for nm in ("E2^2", "E2*E3q2", "E3q2^2", "E2^3", "E6"):
        assert nm in names, nm
    weights = {nm: w for nm, w, _ in b.elements}
    assert weights["E2*E4"] == 6 and weights["E5q2"] == 5
    series = {nm: s for nm, _, s in b.elements}
    assert series["1"] == QSeries.one(8, "q")
    assert series["E2^2"] == eisenstein_even(2, 8) * eisenstein_even(2, 8)
    assert series["E2*E3q2"] == \
        eisenstein_even(2, 8) * eisenstein_odd_q2(3, 8)
    assert len(EisensteinBasis(0, 4).elements) == 1


def test_fit_recovers_a_pure_monomial():
    target = eisenstein_even(2, 13) * eisenstein_even(2, 13)
    rep = fit_in_R(target, 4, 8, 12)
    assert rep["combination"] == [("E2^2", 1)]
    assert rep["validated_to_qorder"] == 12


def test_fit_rank_one_v_coefficients():
    rep0 = fit_v_coefficient(1, 0, 0, fit_qorder=6, test_qorder=10)
    assert rep0["combination"] == [{"monomial": "1", "coeff": "-1"}]
    rep2 = fit_v_coefficient(1, 0, 2, fit_qorder=6, test_qorder=10)
    assert rep2["combination"] == [{"monomial": "E2", "coeff": "-1/12"}]
    rep4 = fit_v_coefficient(1, 0, 4, fit_qorder=8, test_qorder=12)
    assert rep4["combination"] == [
        {"monomial": "E2^2", "coeff": "-1/288"},
        {"monomial": "E4", "coeff": "-1/1440"}]


def test_fit_solution_reevaluates_to_target():
    target = v_partition_series(2, 1, 13, 3).coeff(2)
    rep = fit_in_R(target, 4, 8, 12)
    basis = {nm: s for nm, _, s in EisensteinBasis(4, 13).elements}
    acc = QSeries.zero(13, "q")
    for nm, c in rep["combination"]:
        acc = acc + basis[nm] * c
    assert acc.agrees(target)


def test_fit_no_solution_and_validation_failure():
    with pytest.raises(NoSolution):
        fit_in_R(sigma_series(3, 13), 2, 7, 12)
    bump = QSeries(0, [0] * 9 + [1] + [0] * 3, "q")
    with pytest.raises(ValidationFailure):
        fit_in_R(eisenstein_even(2, 13) + bump, 2, 8, 12)


def test_fit_weight_ceiling_exhaustion():
    with pytest.raises(NoSolution):
        fit_v_coefficient(1, 0, 2, fit_qorder=6, test_qorder=10,
                          weight_ceiling=0)
    with pytest.raises(NoSolution):
        fit_v_coefficient(1, 0, 2, fit_qorder=6, test_qorder=10,
                          weight_bound=0)


def test_fit_report_is_json_ready():
    rep = fit_v_coefficient(2, 1, 2, fit_qorder=8, test_qorder=12)
    assert set(rep) == {"n", "r", "s", "weight_bound", "combination",
                        "validated_to_qorder"}
    json.dumps(rep)
    assert rep["validated_to_qorder"] == 12
    assert all(set(item) == {"monomial", "coeff"}
               for item in rep["combination"])
