"""Stable-pair partition functions of a K3 surface, by three routes.

The objects here are generating series whose coefficients count (with
Hodge- or Euler-weights) coherent systems on a K3: a sheaf together with
an n-dimensional space of sections.  Everything is exact; truncations
carry an explicit q-order and y-window and every stored coefficient is
correct as stated (window drops never fold back, because each lattice
term contributes a single y-monomial).

Routes for the normalized series G (= F divided by the Hilbert-scheme
series S):

* ``g_closed``      -- the double-sum closed form over a (p, l) lattice;
* ``f_via_matrices``-- F itself from transfer-matrix entries and S;
* ``g_via_kernels`` -- theta-kernel combination, with the headline
                       (u-1)^(2n-1) divisibility check built in.

The three must agree coefficient-for-coefficient; the verification
drivers compare them on common truncations.
"""

from fractions import Fraction
from math import comb

from .errors import (Mismatch, NegativeDim, NonExactDivision, NotDivisible,
                     UnsupportedRank)
from .rings import Monomial, TTPoly, UPoly, YPoly
from .series import QSeries
from .theta import phi_product, psi
from .ucomb import c_table, matrix_entry, matrix_product_entry, u_binomial, \
    u_integer


# ---------------------------------------------------------------------------
# Mukai vectors

class MukaiVector:
    """Lattice triple (rank, d * class, chi - rank) of a sheaf on a K3.

    ``d`` is the multiplicity of a fixed primitive divisor class of
    self-intersection 2*genus - 2; the library only ever needs d = 0
    (no curve class) or d = 1.
    """

    __slots__ = ("r", "d", "a", "genus")

    def __init__(self, r: int, d: int, a: int, genus: int = 0):
        if d not in (0, 1):
            raise ValueError("class multiplicity must be 0 or 1")
        if genus < 0:
            raise ValueError("genus must be nonnegative")
        self.r = r
        self.d = d
        self.a = a
        self.genus = genus

    def __repr__(self):
        mid = f"D_{self.genus}" if self.d else "0"
        return f"MukaiVector({self.r}, {mid}, {self.a})"


def mukai_pairing(v: MukaiVector, w: MukaiVector) -> int:
    """Lattice pairing; equals -chi(RHom) of the corresponding sheaves.

    The middle-slot term contributes d*d*(2g-2); when both vectors carry
    the class they must carry the same one.
    """
    if v.d and w.d and v.genus != w.genus:
        raise ValueError("pairing needs a common divisor class")
    g = v.genus if v.d else w.genus
    return v.d * w.d * (2 * g - 2) - v.r * w.a - v.a * w.r


def moduli_dim(v: MukaiVector) -> int:
    """Expected dimension 2 + (v, v) of the sheaf moduli space.

    Requires the curve class to be present (d = 1), in which case the
    pairing formula collapses to 2*(genus - r*a); raises NegativeDim for
    an empty moduli space.
    """
    if v.d != 1:
        raise ValueError("dimension formula needs the divisor class present")
    dim = 2 + mukai_pairing(v, v)
    assert dim == 2 * (v.genus - v.r * v.a)
    if dim < 0:
        raise NegativeDim(f"expected dimension {dim} < 0: empty moduli")
    return dim


# ---------------------------------------------------------------------------
# Hilbert schemes of points

# (p-exponent, q-exponent, multiplicity) of the monomials a in the
# factors (1 - a q^m)^{-mult} of the Hodge generating series.  The
# diagonal variable u = t*tb never appears alone: the five factors are
# u^{-1}, t^2 u^{-1} = t/tb, 1 (20-fold), tb/t, and u.
_HODGE_FACTORS = (((-1, -1), 1), ((1, -1), 1), ((0, 0), 20),
                  ((-1, 1), 1), ((1, 1), 1))

_hilb_cache: dict = {"order": 0, "series": None}


def _tt_geometric(mono: TTPoly, m: int, qorder: int) -> QSeries:
    """1 / (1 - mono * q^m) truncated at qorder."""
    cells, acc, j = {}, TTPoly.one(), 0
    while m * j < qorder:
        cells[m * j] = acc
        acc = acc * mono
        j += 1
    return QSeries.from_dict(cells, 0, qorder)


def _hilbert_series(qorder: int) -> QSeries:
    """Hodge series of the Hilbert schemes, q^m-coefficient c(m)*(t tb)^{-m}.

    Cached and grown on demand; callers get a truncation of one shared
    computation so repeated table builds stay cheap.
    """
    if _hilb_cache["order"] < qorder:
        target = max(qorder, 2 * _hilb_cache["order"], 8)
        f = QSeries.from_dict({0: TTPoly.one()}, 0, target)
        for m in range(1, target):
            for (p, q), mult in _HODGE_FACTORS:
                g = _tt_geometric(TTPoly.mono(p, q), m, target)
                f = f * (g ** mult)
        _hilb_cache["order"] = target
        _hilb_cache["series"] = f
    return _hilb_cache["series"].truncate(qorder)


def hilb_hodge(m: int) -> TTPoly:
    """Hodge polynomial of the Hilbert scheme of m points on a K3.

    Negative m counts an empty moduli space and gives 0.
    """
    if m < 0:
        return TTPoly.zero()
    return _hilbert_series(m + 1).coeff(m) * TTPoly.mono(m, m)


def s_series(qorder: int) -> QSeries:
    """The series S: coefficient of q^(g-1) is hilb_hodge(g) * (t tb)^{-g}."""
    return _hilbert_series(qorder + 1).shift(-1)


def euler_s_series(qorder: int) -> QSeries:
    """Euler-characteristic shadow of S, with integer coefficients.

    Computed independently of the Hodge product (as the inverse 24th
    power of the q-Pochhammer (q;q), shifted by q^{-1}) so it can serve
    as an oracle for the t = tb = 1 specialization: 1, 24, 324, 3200, ...
    """
    ord1 = qorder + 1
    f = QSeries.one(ord1)
    for m in range(1, ord1):
        f = f * (QSeries.from_dict({0: 1, m: -1}, 0, ord1) ** 24)
    return f.invert().truncate(ord1).shift(-1)


# ---------------------------------------------------------------------------
# Coherent-system tables

def _check_rank(n: int, r: int) -> None:
    if n < 1:
        raise ValueError("section rank n must be >= 1")
    if r < 0 or r > n:
        raise UnsupportedRank(
            f"sheaf rank r={r} outside 0..{n}: table undefined there")


def syst_hodge(n: int, r: int, g: int, k: int) -> TTPoly:
    """Hodge polynomial of the coherent-system moduli at lattice spot (g, k).

    Finite sum of transfer-matrix entries against Hilbert-scheme Hodge
    polynomials; negative k is folded to (−k, n−r) by the dual-system
    isomorphism before summing, since the sum is only derived for k >= 0.
    """
    _check_rank(n, r)
    if g < 0:
        raise ValueError("genus must be nonnegative")
    if k < 0:
        k, r = -k, n - r
    total = TTPoly.zero()
    l = r
    while l * l + l * k <= g:
        c = hilb_hodge(g - l * l - l * k)
        if c:
            p = matrix_entry("P", k + 2 * r, k + 2 * l, n)
            if p:
                total = total + p.to_tt() * c
        l += 1
    return total


def syst_euler(n: int, r: int, g: int, k: int) -> int:
    """Euler characteristic of the same moduli (t = tb = 1)."""
    return syst_hodge(n, r, g, k).eval_ones()


def syst_table(n: int, r: int, gmax: int, kmin: int, kmax: int,
               hodge: bool = False) -> list:
    """Rows {n, r, g, k, value} for 0 <= g <= gmax, kmin <= k <= kmax.

    ``value`` is the integer Euler characteristic, or the Hodge
    polynomial rendered as a string when ``hodge`` is set.
    """
    rows = []
    for g in range(gmax + 1):
        for k in range(kmin, kmax + 1):
            h = syst_hodge(n, r, g, k)
            rows.append({"n": n, "r": r, "g": g, "k": k,
                         "value": str(h) if hodge else h.eval_ones()})
    return rows


def stratum_hodge(l: int, k: int, g: int, s: int) -> TTPoly:
    """Hodge polynomial of one section-count stratum inside a sheaf moduli.

    The stratum of sheaves with exactly k + 2l + 2s sections is a
    Grassmannian bundle over a brick of the section-erased table: the
    u-binomial [[k+2l+2s, s]] times the (B-conjugated) Hilbert-side
    entry.  Summing over s >= 0 must rebuild the plain Hilbert-side
    coefficient; tests use that resummation as the oracle.
    """
    if min(l, k, g, s) < 0:
        raise ValueError("stratum indices must be nonnegative")
    a = k + 2 * l + 2 * s
    ent = TTPoly.zero()
    j = 0
    while True:
        lp = l + s + j
        m = g - lp * lp - lp * k
        if m < 0:
            break
        c = hilb_hodge(m)
        if c:
            b = matrix_entry("B", a, a + 2 * j)
            if b:
                ent = ent + b.to_tt() * c
        j += 1
    if not ent:
        return TTPoly.zero()
    return u_binomial(a, s).to_tt() * ent


# ---------------------------------------------------------------------------
# Partition functions

class PartitionFunction:
    """A truncated partition function with its route parameters attached.

    ``series`` is q-major with YPoly coefficients; the normalized form G
    starts at q^0 with u-Laurent values, the raw form F starts at q^{-1}
    with (t, tb) values.
    """

    __slots__ = ("n", "r", "qorder", "ywin", "series")

    def __init__(self, n: int, r: int, qorder: int, ywin: int,
                 series: QSeries):
        self.n = n
        self.r = r
        self.qorder = qorder
        self.ywin = ywin
        self.series = series

    def coeff(self, e: int):
        return self.series.coeff(e)

    def __repr__(self):
        return (f"PartitionFunction(n={self.n}, r={self.r}, "
                f"qorder={self.qorder}, ywin={self.ywin})")


def _cells_to_series(cells: dict, lower: int, qorder: int,
                     ywin: int) -> QSeries:
    cols = {}
    for qe, col in cells.items():
        y = {e: v for e, v in col.items() if v}
        if y:
            cols[qe] = YPoly(y, ywin)
    return QSeries.from_dict(cols, lower, qorder)


def g_closed(n: int, r: int, qorder: int, ywin: int) -> PartitionFunction:
    """Normalized partition function from the closed double sum.

    Lattice terms (p, l) with p >= n-r, l >= r contribute at q^{pl},
    y^{p-l}; the assembled numerator must be exactly divisible by the
    u-integer [n] (NonExactDivision otherwise), and the result is scaled
    by u^{r(n-r)}.
    """
    _check_rank(n, r)
    cells: dict = {}
    hi = qorder + ywin + 1
    for l in range(r, r + hi):
        for p in range(n - r, n - r + hi):
            if p * l >= qorder or abs(p - l) > ywin:
                continue
            w = u_integer(p + l) * u_binomial(n + l - r - 1, n - 1) \
                * u_binomial(p + r - 1, n - 1)
            if not w:
                continue
            w = w.shift(-2 * (n * l + (p - l) * r))
            col = cells.setdefault(p * l, {})
            col[p - l] = col.get(p - l, UPoly.zero()) + w
    shift = 2 * r * (n - r)
    for qe, col in cells.items():
        for ye, w in col.items():
            try:
                col[ye] = w.div_u_integer(n).shift(shift)
            except NotDivisible as exc:
                raise NonExactDivision(
                    f"closed-form numerator at q^{qe} y^{ye} not divisible "
                    f"by [{n}]") from exc
    return PartitionFunction(n, r, qorder, ywin,
                             _cells_to_series(cells, 0, qorder, ywin))


def f_via_matrices(n: int, r: int, qorder: int, ywin: int) \
        -> PartitionFunction:
    """Raw partition function F from transfer-matrix entries times S.

    The y^k (k >= 0) and y^{-k} (k >= 1) halves sum matrix entries
    P[k+2r, k+2l] and P[k+2(n-r), k+2l] over l; entries are taken from
    the genuine matrix product so this route shares no closed form with
    g_closed.  Coefficients live in the (t, tb) ring via u = t*tb.
    """
    _check_rank(n, r)
    t_order = qorder + 1
    cells: dict = {}

    def add(row_shift: int, l_min: int, ysign: int, k: int) -> None:
        l = l_min
        while l * l + l * k < t_order:
            w = matrix_product_entry(n, k + row_shift, k + 2 * l)
            if w:
                qe = l * l + l * k
                col = cells.setdefault(qe, {})
                ye = ysign * k
                col[ye] = col.get(ye, UPoly.zero()) + w.shift(-2 * qe)
            l += 1

    for k in range(0, ywin + 1):
        add(2 * r, r, +1, k)
    for k in range(1, ywin + 1):
        add(2 * (n - r), n - r, -1, k)

    t_ser = _cells_to_series(cells, 0, t_order, ywin).map_coeffs(
        lambda col: col.map_coeffs(lambda v: v.to_tt()))
    s_ser = s_series(qorder).map_coeffs(lambda c: YPoly.const(c, ywin))
    return PartitionFunction(n, r, qorder, ywin, s_ser * t_ser)


def g_from_f(pf: PartitionFunction) -> PartitionFunction:
    """Divide a matrix-route F by the Hilbert-scheme series S.

    Exact because S is a unit (leading coefficient 1 at q^{-1}); the
    result starts at q^0 and is comparable with the other two routes
    after their u-coefficients are embedded via u = t*tb.
    """
    s_ser = s_series(pf.qorder + 1).map_coeffs(
        lambda c: YPoly.const(c, pf.ywin))
    g = (pf.series * s_ser.invert()).truncate(pf.qorder)
    return PartitionFunction(pf.n, pf.r, pf.qorder, pf.ywin, g)


def g_via_kernels(n: int, r: int, qorder: int, ywin: int) \
        -> PartitionFunction:
    """Normalized partition function from the theta-kernel combination.

    Sums the weight table against kernels Psi(u^i, u^{j-r} y; q), asserts
    every (q, y)-coefficient is exactly divisible by (u-1)^(2n-1) --
    NotDivisible here is the headline consistency check -- then divides
    by [n] ([n-1]!)^2 and scales by u^{r(n-r)}.

    Two boundary notes, both forced by matching the closed double sum:

    * The kernel's second argument carries u^{j-r}, not u^j: the
      j-index of the weight table tracks powers of u^{p-l} while the
      lattice terms being resummed carry u^{-(p-l)r}, so the two offset
      by exactly r.  (With u^j alone the route reproduces the correct
      series with y scaled to u^r y, which breaks every rank r > 0.)
    * At r = n the resummation needs its q^0 column repaired: the
      kernel starts at p = 1 and so misses the p = 0 lattice column
      (which vanishes for r < n but not at r = n), and its l = 0 row
      evaluates a Gaussian binomial where the Laurent continuation of
      the product formula is nonzero even though the zero-outside-range
      convention of the lattice sum says zero.  The column is added and
      the row subtracted, term by term, before the final division.
    """
    _check_rank(n, r)
    cells: dict = {}
    for (i, j), w in c_table(n, r).entries.items():
        part = psi(Monomial(2 * i, 0), Monomial(2 * (j - r), 1),
                   qorder, ywin)
        for qe in range(part.lower, part.order):
            col = part.coeff(qe)
            if not col:
                continue
            dst = cells.setdefault(qe, {})
            for ye, v in col.c.items():
                dst[ye] = dst.get(ye, UPoly.zero()) + v * w
    for qe, col in cells.items():
        for ye, w in col.items():
            w = w.div_u_minus_one(2 * n - 1)
            for m in range(2, n):
                w = w.div_u_integer(m).div_u_integer(m)
            col[ye] = w
    if r == n:
        col = cells.setdefault(0, {})
        for l in range(n, ywin + 1):
            w = u_integer(l) * u_binomial(l - 1, n - 1)
            col[-l] = col.get(-l, UPoly.zero()) + w
        sgn = 1 if n % 2 else -1
        for p in range(1, ywin + 1):
            w = (u_integer(p) * u_binomial(p + n - 1, n - 1)).shift(
                -2 * n * p - n * (n - 1))
            col[p] = col.get(p, UPoly.zero()) - (w if sgn > 0 else -w)
    shift = 2 * r * (n - r)
    for qe, col in cells.items():
        for ye, w in col.items():
            col[ye] = w.div_u_integer(n).shift(shift) if w else w
    return PartitionFunction(n, r, qorder, ywin,
                             _cells_to_series(cells, 0, qorder, ywin))


# ---------------------------------------------------------------------------
# Euler specialization

def _binom(m: int, k: int) -> int:
    return comb(m, k) if 0 <= k <= m else 0


def euler_g(n: int, r: int, qorder: int, ywin: int) -> QSeries:
    """u = 1 shadow of g_closed, from the integer closed form directly.

    Must equal the coefficientwise u -> 1 evaluation of g_closed; the
    weights are (p+l)/n times two ordinary binomials, so the values are
    rationals with denominator dividing n.
    """
    _check_rank(n, r)
    cells: dict = {}
    hi = qorder + ywin + 1
    for l in range(r, r + hi):
        for p in range(n - r, n - r + hi):
            if p * l >= qorder or abs(p - l) > ywin:
                continue
            w = (p + l) * _binom(n + l - r - 1, n - 1) \
                * _binom(p + r - 1, n - 1)
            if not w:
                continue
            col = cells.setdefault(p * l, {})
            col[p - l] = col.get(p - l, Fraction(0)) + Fraction(w, n)
    return _cells_to_series(cells, 0, qorder, ywin)


def euler_g_column(n: int, r: int, m: int) -> dict:
    """Full (unwindowed) q^m coefficient of euler_g, m >= 1.

    Finite because p*l = m >= 1 has finitely many factorizations; the
    q^0 column has unbounded y-support and is handled analytically by
    the modular layer instead.  Returns {y-exponent: Fraction}.
    """
    _check_rank(n, r)
    if m < 1:
        raise ValueError("column 0 has unbounded support; see the v-series "
                         "builders for its closed form")
    out: dict = {}
    for l in range(1, m + 1):
        if m % l or l < r:
            continue
        p = m // l
        if p < n - r:
            continue
        w = (p + l) * _binom(n + l - r - 1, n - 1) \
            * _binom(p + r - 1, n - 1)
        if w:
            ye = p - l
            out[ye] = out.get(ye, Fraction(0)) + Fraction(w, n)
    return {e: v for e, v in out.items() if v}


# ---------------------------------------------------------------------------
# Rank-one product identity

def _first_u_diff(a, b) -> int:
    if not isinstance(a, UPoly):
        a = UPoly.const(a) if a else UPoly.zero()
    if not isinstance(b, UPoly):
        b = UPoly.const(b) if b else UPoly.zero()
    keys = sorted(set(a.c) | set(b.c))
    for e2 in keys:
        if a.coeff(e2) != b.coeff(e2):
            return e2
    raise AssertionError("no difference found")


def ky_product(qorder: int, ywin: int) -> QSeries:
    """Verify the rank-one partition function against its theta quotient.

    Cross-multiplied to stay polynomial: asserts

        (1 - y)(1 - u^{-1} y^{-1}) * G(n=1, r=0)  ==  -u^{-1} * Phi(u, y; q)

    coefficient-exactly on the stated window (internally both sides are
    built one y-degree wider, since the cross factor consumes one).
    Returns the verified left side; Mismatch carries the first
    differing (q, y, u) exponent triple.
    """
    if ywin < 0:
        raise ValueError("ywin must be nonnegative")
    wide = ywin + 1
    cross = YPoly({0: UPoly({0: 1, -2: 1}),
                   1: UPoly({0: -1}),
                   -1: UPoly({-2: -1})}, wide)
    lhs = g_closed(1, 0, qorder, wide).series.map_coeffs(
        lambda c: c * cross)
    neg_uinv = UPoly({-2: -1})
    rhs = phi_product(1, 0, qorder, wide).map_coeffs(
        lambda c: c * neg_uinv)
    win = ywin
    for qe in range(0, qorder):
        a, b = lhs.coeff(qe), rhs.coeff(qe)
        if not isinstance(a, YPoly):
            a = YPoly.const(a) if a else YPoly.zero()
        if not isinstance(b, YPoly):
            b = YPoly.const(b) if b else YPoly.zero()
        for ye in range(-win, win + 1):
            av, bv = a.coeff(ye), b.coeff(ye)
            if av != bv:
                raise Mismatch(
                    "rank-one product identity fails",
                    location={"q": qe, "y": ye,
                              "u2": _first_u_diff(av, bv)})
    return lhs.map_coeffs(lambda c: c.restrict(win))


# ---------------------------------------------------------------------------
# Comparison helpers

def to_tt_series(f: QSeries) -> QSeries:
    """Embed a u-Laurent-valued q-series into the (t, tb) ring."""
    return f.map_coeffs(lambda col: col.map_coeffs(lambda v: v.to_tt()))


def mirror_series(f: QSeries) -> QSeries:
    """Columnwise y -> 1/y."""
    return f.map_coeffs(lambda col: col.mirror())
