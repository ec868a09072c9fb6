"""Eisenstein layer: the v-expansion of the counting series and its
recognition inside a bounded-weight ring of q-series.

After substituting y -> e^{iv}, each power of v in v^2 * G(n, r; q, y)
carries a power series in q.  This module builds those series exactly
(the q^0 column from a closed rational form, the rest from the
full-support integer columns of the Euler specialization), provides the
divisor-sum and Eisenstein generators of the ring the coefficients are
expected to live in, the closed forms for the v-coefficients of the
log-product kernel together with their u-derivatives at u = 1, two
independent product-side consistency checks, and an exact linear fitter
over Q(i) with a held-out validation window.

No floats, no numerics: every comparison is coefficient-exact, and every
verifier raises Mismatch with the first differing exponent location
instead of returning a best effort.
"""

from fractions import Fraction
from math import factorial

from .errors import Mismatch, NoSolution, ValidationFailure
from .partition import _check_rank, euler_g_column
from .rings import UPoly
from .scalars import GaussianRational, bernoulli, binomial, secant_number
from .series import QSeries, locate_mismatch, v_substitute_qmajor
from .theta import log_phi_product

__all__ = [
    "EisensteinBasis", "b_series", "eisenstein_even", "eisenstein_odd_q2",
    "fit_in_R", "fit_v_coefficient", "logphi_sigma_check", "mpt_check",
    "psi_kls", "psi_kls_derivative", "psi_kls_sym", "sigma_series",
    "v_expansion_symmetry_report", "v_partition_series",
    "verify_psi_vs_log",
]

_I_POW = (GaussianRational(1), GaussianRational.i(),
          GaussianRational(-1), -GaussianRational.i())


def _divisors(n: int) -> list:
    return [d for d in range(1, n + 1) if n % d == 0]


# ---------------------------------------------------------------------------
# generators

def sigma_series(w: int, qorder: int) -> QSeries:
    """sum_{n >= 1} sigma_w(n) q^n, the w-th-power divisor sums, sieved."""
    if w < 0:
        raise ValueError("divisor-sum weight must be nonnegative")
    acc = [0] * max(qorder, 1)
    for d in range(1, qorder):
        dw = d ** w
        for m in range(d, qorder, d):
            acc[m] += dw
    return QSeries(1, acc[1:qorder], "q")


def eisenstein_even(weight: int, qorder: int) -> QSeries:
    """Level-one Eisenstein series of even weight, constant term 1."""
    if weight < 2 or weight % 2:
        raise ValueError("even Eisenstein weight must be even and >= 2")
    if qorder < 1:
        raise ValueError("qorder must be positive")
    sig = sigma_series(weight - 1, qorder)
    c = Fraction(-2 * weight) / bernoulli(weight)
    return QSeries(0, [Fraction(1)] + [c * sig.coeff(n)
                                       for n in range(1, qorder)], "q")


def eisenstein_odd_q2(weight: int, qorder: int) -> QSeries:
    """Odd-weight companion series, already taken at q^2.

    Normalized by the secant numbers: weight 2g + 1 carries the factor
    4 (-1)^g / e_{2g} on the divisor sums sigma_{2g-1}.
    """
    if weight < 3 or weight % 2 == 0:
        raise ValueError("odd Eisenstein weight must be odd and >= 3")
    if qorder < 1:
        raise ValueError("qorder must be positive")
    g = (weight - 1) // 2
    sig = sigma_series(weight - 2, qorder)
    c = Fraction(4 * (-1) ** g, secant_number(2 * g))
    return QSeries(0, [Fraction(1)] + [c * sig.coeff(n)
                                       for n in range(1, qorder)], "q")


def b_series(vorder: int) -> QSeries:
    """v^2 / ((e^{iv} - 1)(e^{-iv} - 1)) as a series in Q[[v]].

    Coefficient of v^m is i^m / m! times the alternating double Bernoulli
    sum over B_k B_{m-k}; the odd-m sums cancel identically, which keeps
    the series real.
    """
    if vorder < 0:
        raise ValueError("vorder must be nonnegative")
    out = []
    fact = 1
    for m in range(vorder):
        if m:
            fact *= m
        inner = Fraction(0)
        for k in range(m + 1):
            inner += (-1) ** k * bernoulli(k) * bernoulli(m - k) \
                * binomial(m, k)
        if m % 2:
            assert inner == 0, m
            out.append(0)
        else:
            out.append((-1) ** (m // 2) * inner / fact if inner else 0)
    return QSeries(0, out, "v")


# ---------------------------------------------------------------------------
# closed forms for the v-coefficients of the log-product kernel

def psi_kls_sym(k: int, l: int, s: int, qorder: int) -> QSeries:
    """v^s coefficient of log phi_product(k, l), u kept symbolic.

    A lacunary divisor-type sum: the q^n cell is a Laurent polynomial in
    u supported on exponents (k+l)r, l r (and their negatives) over the
    divisors r of n, with s = 0 picking up the balancing terms that make
    the whole cell vanish at u = 1.
    """
    if s < 0:
        raise ValueError("v-power must be nonnegative")
    cols = []
    if s == 0:
        terms = ((k + l, 1), (-(k + l), 1), (l, 1), (-l, 1),
                 (0, -2), (k, -1), (-k, -1))
        for n in range(1, qorder):
            cell: dict = {}
            for r in _divisors(n):
                w = Fraction(1, r)
                for e, c in terms:
                    key = 2 * e * r
                    cell[key] = cell.get(key, 0) + c * w
            cols.append(UPoly(cell))
    else:
        sgn = -1 if s % 2 else 1
        pref = _I_POW[s % 4] * Fraction(1, factorial(s))
        for n in range(1, qorder):
            cell = {}
            for r in _divisors(n):
                w = pref * r ** (s - 1)
                for e, c in (((k + l) * r, 1), (-(k + l) * r, sgn),
                             (l * r, 1), (-l * r, sgn)):
                    cell[2 * e] = cell.get(2 * e, 0) + c * w
            cols.append(UPoly(cell))
    return QSeries(1, cols, "q")


def psi_kls_derivative(k: int, l: int, s: int, t: int,
                       qorder: int) -> QSeries:
    """t-th u-derivative of psi_kls_sym(k, l, s) at u = 1, in closed form.

    Differentiating u^m picks up the falling factorial t! * C(m, t), so
    each q^n cell collapses to a signed binomial sum over the divisors
    of n.  Exact GaussianRational coefficients.
    """
    if s < 0 or t < 0:
        raise ValueError("v-power and derivative order must be nonnegative")
    cols = []
    if s == 0:
        terms = ((k + l, 1), (-(k + l), 1), (l, 1), (-l, 1),
                 (k, -1), (-k, -1))
        tf = factorial(t)
        for n in range(1, qorder):
            acc = Fraction(0)
            for r in _divisors(n):
                inner = sum(c * binomial(e * r, t) for e, c in terms)
                if t == 0:
                    inner -= 2
                if inner:
                    acc += Fraction(inner, r)
            cols.append(GaussianRational(tf * acc) if acc else 0)
    else:
        sgn = -1 if s % 2 else 1
        pref = _I_POW[s % 4] * Fraction(factorial(t), factorial(s))
        for n in range(1, qorder):
            acc = 0
            for r in _divisors(n):
                inner = (binomial((k + l) * r, t)
                         + sgn * binomial(-(k + l) * r, t)
                         + binomial(l * r, t) + sgn * binomial(-l * r, t))
                if inner:
                    acc += r ** (s - 1) * inner
            cols.append(pref * acc if acc else 0)
    return QSeries(1, cols, "q")


def psi_kls(k: int, l: int, s: int, qorder: int) -> QSeries:
    """u = 1 value of the v^s coefficient of log phi_product(k, l)."""
    return psi_kls_derivative(k, l, s, 0, qorder)


def _du_at_one(c, t: int):
    if isinstance(c, UPoly):
        return c.deriv_at_one(t)
    return c if t == 0 else 0


def verify_psi_vs_log(k: int, l: int, qorder: int, vorder: int,
                      tmax: int = 3) -> dict:
    """Cross-check every closed form against the direct log expansion.

    Expands log phi_product(k, l) through the substitution engine and
    compares, for each v-power s < vorder: the u-symbolic closed form
    cell by cell, then the t-th u-derivatives at u = 1 for t <= tmax
    against their closed binomial sums.  Raises Mismatch with the first
    differing (v, q[, du]) location; returns a check count on success.
    """
    ywin = max(qorder - 1, 0)
    direct = v_substitute_qmajor(log_phi_product(k, l, qorder, ywin), vorder)
    checks = 0
    for s in range(vorder):
        dcol = direct.coeff(s)
        sym = psi_kls_sym(k, l, s, qorder)
        e = dcol.first_mismatch(sym)
        if e is not None:
            loc = {"v": s, "q": e}
            loc.update(locate_mismatch(dcol.coeff(e), sym.coeff(e)))
            raise Mismatch("closed form of the log-product v-coefficient "
                           "disagrees with the direct expansion", loc)
        checks += 1
        for t in range(tmax + 1):
            der = dcol.map_coeffs(lambda c: _du_at_one(c, t))
            closed = psi_kls_derivative(k, l, s, t, qorder)
            e = der.first_mismatch(closed)
            if e is not None:
                raise Mismatch(
                    "closed u-derivative of the log-product v-coefficient "
                    "disagrees with the direct expansion",
                    {"v": s, "q": e, "du": t})
            checks += 1
    return {"k": k, "l": l, "qorder": qorder, "vorder": vorder,
            "tmax": tmax, "checks": checks, "ok": True}


# ---------------------------------------------------------------------------
# the v-expansion of the counting series

def _exp_i_times(mult: int, vorder: int) -> QSeries:
    """exp(i * mult * v) to the requested order."""
    fact = 1
    cells = []
    for m in range(vorder):
        if m:
            fact *= m
        cells.append(_I_POW[m % 4] * Fraction(mult ** m, fact))
    return QSeries(0, cells, "v")


def _bern_exp(vorder: int) -> QSeries:
    """iv / (e^{iv} - 1) = sum_m B_m (iv)^m / m!."""
    fact = 1
    cells = []
    for m in range(vorder):
        if m:
            fact *= m
        b = bernoulli(m)
        cells.append(_I_POW[m % 4] * (b / fact) if b else 0)
    return QSeries(0, cells, "v")


def _boundary_q0_column(n: int, vorder: int) -> QSeries:
    """q^0 column of v^2 G(n, 0): the expansion of v^2 y^n / (1-y)^{n+1}
    at y = e^{iv}, written i^{n+1} v^{1-n} e^{inv} (iv/(e^{iv}-1))^{n+1}
    so that only Bernoulli numbers are needed."""
    need = max(vorder + n - 1, 0)
    col = (_bern_exp(need) ** (n + 1)) * _exp_i_times(n, need)
    return (col * _I_POW[(n + 1) % 4]).shift(1 - n)


def v_partition_series(n: int, r: int, qorder: int, vorder: int) -> QSeries:
    """v-major expansion of v^2 G(n, r; q, e^{iv}).

    Returns a QSeries in v (lower 1 - n) whose coefficients are QSeries
    in q with GaussianRational cells.  The q^0 column is nonzero only at
    the extreme ranks: for r = 0 it is the closed rational form expanded
    through Bernoulli numbers, for r = n its coefficientwise conjugate
    (y -> 1/y on the boundary term); every q^m column with m >= 1 comes
    from the finite integer-support cells of the Euler specialization.
    """
    _check_rank(n, r)
    if qorder < 1:
        raise ValueError("qorder must be positive")
    lo = 1 - n
    if vorder < lo:
        raise ValueError("vorder must reach the polar depth 1 - n")
    cols: list = [dict() for _ in range(vorder - lo)]
    if r == 0 or r == n:
        col0 = _boundary_q0_column(n, vorder)
        if r == n:
            col0 = col0.map_coeffs(lambda c: c.conjugate())
        for s in range(lo, vorder):
            c = col0.coeff(s)
            if c:
                cols[s - lo][0] = c
    for m in range(1, qorder):
        cells = euler_g_column(n, r, m)
        fact = 1
        for s in range(2, vorder):
            e = s - 2
            if e:
                fact *= e
            pref = _I_POW[e % 4] * Fraction(1, fact)
            acc = 0
            for j, c in cells.items():
                w = pref * j ** e
                if w:
                    acc = acc + c * w
            if acc:
                cols[s - lo][m] = acc
    return QSeries(lo, [QSeries.from_dict(d, 0, qorder, "q")
                        for d in cols], "v")


def v_expansion_symmetry_report(n: int, r: int, qorder: int,
                                vorder: int) -> list:
    """Cells of the v-expansion that break the even/real pattern.

    Flags every nonzero cell at an odd v-power and every cell with a
    nonzero imaginary part.  The boundary ranks of n >= 2 genuinely
    break the pattern; the report lists the offending cells rather than
    rounding them away.
    """
    f = v_partition_series(n, r, qorder, vorder)
    bad = []
    for s in range(f.lower, f.order):
        col = f.coeff(s)
        for m in range(qorder):
            c = col.coeff(m)
            if not c:
                continue
            g = GaussianRational.coerce(c)
            if s % 2 or g.im:
                bad.append({"v": s, "q": m, "value": str(g)})
    return bad


# ---------------------------------------------------------------------------
# product-side consistency checks

def mpt_check(qorder: int, vorder: int) -> dict:
    """Rank-one v-expansion against the Eisenstein exponential.

    Verifies -v^2 G(1, 0; q, e^{iv}) == exp(sum_{g >= 1} v^{2g}
    |B_{2g}| / (g (2g)!) E_{2g}(q)) coefficient-exactly; the exponential
    is taken in the ring of q-series.  Mismatch carries the (v, q)
    location.
    """
    lhs = -v_partition_series(1, 0, qorder, vorder)
    rows: list = [0] * vorder
    for g in range(1, (vorder - 1) // 2 + 1):
        w = abs(bernoulli(2 * g)) / (g * factorial(2 * g))
        rows[2 * g] = eisenstein_even(2 * g, qorder) * w
    rhs = QSeries(0, rows, "v").exp(one=QSeries.one(qorder, "q"))
    lhs.assert_agrees(rhs, what="rank-one Eisenstein exponential form")
    return {"qorder": qorder, "vorder": vorder, "ok": True}


def logphi_sigma_check(qorder: int, vorder: int) -> dict:
    """u = 1 shadow of the log-product against pure divisor sums.

    Verifies that substituting y -> e^{iv} into log phi_product(0, 0)
    gives 4 sum_{k >= 1} (-1)^k v^{2k} / (2k)! * sigma_{2k-1}-series,
    with nothing at odd or zero v-powers.  Mismatch carries (v, q).
    """
    ywin = max(qorder - 1, 0)
    direct = v_substitute_qmajor(log_phi_product(0, 0, qorder, ywin), vorder)
    rows: list = [0] * vorder
    for k in range(1, (vorder - 1) // 2 + 1):
        rows[2 * k] = sigma_series(2 * k - 1, qorder) * \
            Fraction(4 * (-1) ** k, factorial(2 * k))
    target = QSeries(0, rows, "v")
    direct.assert_agrees(target, what="log-product divisor-sum shadow")
    return {"qorder": qorder, "vorder": vorder, "ok": True}


# ---------------------------------------------------------------------------
# the bounded-weight ring and the exact fitter

class EisensteinBasis:
    """Monomials of bounded total weight in the Eisenstein generators.

    Generators: even weights w >= 2 give "E{w}"; odd weights w >= 3 give
    "E{w}q2", the odd-weight series taken at q^2.  weight(E_w) = w and
    weights add over products.  ``elements`` holds one (name, weight,
    expansion) triple per monomial of total weight <= weight_bound, the
    empty product "1" included, sorted by (weight, name); expansions
    are exact below q^qorder.
    """

    __slots__ = ("weight_bound", "qorder", "generators", "elements")

    def __init__(self, weight_bound: int, qorder: int):
        if weight_bound < 0:
            raise ValueError("weight bound must be nonnegative")
        if qorder < 1:
            raise ValueError("qorder must be positive")
        self.weight_bound = weight_bound
        self.qorder = qorder
        self.generators = []
        for w in range(2, weight_bound + 1):
            if w % 2 == 0:
                self.generators.append(
                    (f"E{w}", w, eisenstein_even(w, qorder)))
            else:
                self.generators.append(
                    (f"E{w}q2", w, eisenstein_odd_q2(w, qorder)))
        self.elements: list = []
        self._emit(0, 0, [], QSeries.one(qorder, "q"))
        self.elements.sort(key=lambda e: (e[1], e[0]))

    def _emit(self, gi: int, weight: int, parts: list, series: QSeries):
        if gi == len(self.generators):
            name = "*".join(f"{nm}^{e}" if e > 1 else nm
                            for nm, e in parts) or "1"
            self.elements.append((name, weight, series))
            return
        name, w, gen = self.generators[gi]
        e = 0
        cur = series
        while weight + e * w <= self.weight_bound:
            self._emit(gi + 1, weight + e * w,
                       parts + ([(name, e)] if e else []), cur)
            e += 1
            if weight + e * w <= self.weight_bound:
                cur = cur * gen

    def __len__(self):
        return len(self.elements)

    def __repr__(self):
        return (f"EisensteinBasis(weight_bound={self.weight_bound}, "
                f"qorder={self.qorder}, size={len(self.elements)})")


def _solve_exact(rows: list, k: int):
    """Gauss-Jordan over Q(i) on an augmented k+1-column system.

    Returns the particular solution with every free coordinate pinned to
    zero (pivots taken in column order), or None if inconsistent.
    """
    m = len(rows)
    pivots = []
    rr = 0
    for col in range(k):
        p = next((i for i in range(rr, m) if rows[i][col]), None)
        if p is None:
            continue
        rows[rr], rows[p] = rows[p], rows[rr]
        inv = GaussianRational(1) / rows[rr][col]
        rows[rr] = [v * inv for v in rows[rr]]
        for i in range(m):
            if i != rr and rows[i][col]:
                f = rows[i][col]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[rr])]
        pivots.append(col)
        rr += 1
        if rr == m:
            break
    for i in range(rr, m):
        if rows[i][k]:
            return None
    x = [GaussianRational(0)] * k
    for i, col in enumerate(pivots):
        x[col] = rows[i][k]
    return x


def fit_in_R(target: QSeries, weight_bound: int, fit_qorder: int,
             test_qorder: int) -> dict:
    """Express a q-series exactly in the bounded-weight monomials.

    Solves the linear system on the coefficients q^0 .. q^fit_qorder by
    exact elimination over Q(i) and then demands a literally zero
    residual on the held-out window q^{fit_qorder+1} .. q^{test_qorder}.
    Raises NoSolution if the window system is inconsistent and
    ValidationFailure if a window fit breaks beyond it; returns the
    nonzero combination otherwise.
    """
    if not 0 <= fit_qorder < test_qorder:
        raise ValueError("need 0 <= fit_qorder < test_qorder")
    if target.order <= test_qorder:
        raise ValueError("target must be known through the validation order")
    basis = EisensteinBasis(weight_bound, test_qorder + 1)
    names = [nm for nm, _, _ in basis.elements]
    series = [ser for _, _, ser in basis.elements]
    k = len(series)
    rows = [[GaussianRational.coerce(c.coeff(m)) for c in series]
            + [GaussianRational.coerce(target.coeff(m))]
            for m in range(fit_qorder + 1)]
    x = _solve_exact(rows, k)
    if x is None:
        raise NoSolution(
            f"no combination of weight <= {weight_bound} matches the "
            f"window up to q^{fit_qorder}")
    for m in range(fit_qorder + 1, test_qorder + 1):
        acc = GaussianRational(0)
        for xi, ser in zip(x, series):
            if xi:
                acc = acc + xi * ser.coeff(m)
        if acc != GaussianRational.coerce(target.coeff(m)):
            raise ValidationFailure(
                f"combination matches through q^{fit_qorder} but fails "
                f"at q^{m}")
    return {"weight_bound": weight_bound, "fit_qorder": fit_qorder,
            "validated_to_qorder": test_qorder,
            "combination": [(nm, xi) for nm, xi in zip(names, x) if xi]}


def fit_v_coefficient(n: int, r: int, s: int, fit_qorder: int = 20,
                      test_qorder: int = 30, weight_bound: int | None = None,
                      weight_ceiling: int = 12) -> dict:
    """Fit one v-coefficient of v^2 G(n, r) and return a JSON-ready report.

    The expected weight of the v^s coefficient is s + 2, so the search
    starts there (capped by the ceiling) and widens on NoSolution until
    the ceiling is exhausted; an explicit weight_bound disables the
    widening.  Coefficients are reported as exact coefficient strings.
    """
    series = v_partition_series(n, r, test_qorder + 1, s + 1)
    target = series.coeff(s)
    bound = min(s + 2, weight_ceiling) if weight_bound is None \
        else weight_bound
    while True:
        try:
            res = fit_in_R(target, bound, fit_qorder, test_qorder)
            break
        except NoSolution:
            if weight_bound is not None or bound >= weight_ceiling:
                raise
            bound += 1
    return {"n": n, "r": r, "s": s, "weight_bound": res["weight_bound"],
            "combination": [{"monomial": nm, "coeff": str(c)}
                            for nm, c in res["combination"]],
            "validated_to_qorder": res["validated_to_qorder"]}
