"""Truncated Laurent series with exact coefficients in a pluggable ring.

A ``QSeries`` knows its variable name, its structural lowest exponent
``lower`` (support is contained in [lower, oo)), and its truncation horizon
``order``: coefficients are stored, exactly, for every exponent in
[lower, order).  Asking for a coefficient at or beyond ``order`` is an error
— nothing is ever silently assumed zero past the horizon.

Multiplication tracks validity honestly:

    (f * g).order = min(f.order + g.lower, g.order + f.lower)

Coefficients may be int, Fraction, GaussianRational, UPoly, TTPoly, YPoly,
or nested QSeries (a power series in v over q-series is just a QSeries with
var "v" whose coefficients are QSeries with var "q").
"""

from __future__ import annotations

from fractions import Fraction

from .errors import BadConstantTerm, Mismatch, NonUnitLeading
from .rings import TTPoly, UPoly, YPoly
from .scalars import GaussianRational, fraction_str

__all__ = [
    "QSeries",
    "substitute_y_exp_iv",
    "v_substitute_qmajor",
    "qmajor_to_ymajor",
    "ymajor_to_qmajor",
    "locate_mismatch",
    "coeff_str",
    "qseries_json",
]


def _cadd(a, b):
    if isinstance(a, int) and a == 0:
        return b
    if isinstance(b, int) and b == 0:
        return a
    return a + b


def _cmul(a, b):
    if (isinstance(a, int) and a == 0) or (isinstance(b, int) and b == 0):
        return 0
    return a * b


def _czero(c) -> bool:
    return not c


def _is_one(c) -> bool:
    if isinstance(c, (int, Fraction)):
        return c == 1
    if isinstance(c, GaussianRational):
        return c == 1
    if isinstance(c, (UPoly, TTPoly)):
        return c == 1
    if isinstance(c, YPoly):
        return set(c.c) == {0} and c.c[0] == 1
    return False


def _ring_inv(c):
    """Multiplicative inverse of a unit coefficient, or None."""
    if isinstance(c, int):
        return c if c in (1, -1) else None
    if isinstance(c, Fraction):
        return 1 / c if c else None
    if isinstance(c, GaussianRational):
        return GaussianRational(1) / c if c else None
    if isinstance(c, UPoly):
        if c.is_monomial():
            (e2, v), = c.c.items()
            vi = _ring_inv(v)
            return None if vi is None else UPoly({-e2: vi})
        return None
    if isinstance(c, TTPoly):
        if len(c.c) == 1:
            ((p, q), v), = c.c.items()
            vi = _ring_inv(v)
            return None if vi is None else TTPoly({(-p, -q): vi})
        return None
    if isinstance(c, YPoly):
        if len(c.c) == 1:
            (e, v), = c.c.items()
            vi = _ring_inv(v)
            return None if vi is None else YPoly({-e: vi}, c.window)
        return None
    return None


class QSeries:
    """Exact truncated Laurent series in one named variable."""

    __slots__ = ("var", "lower", "coeffs")
    __hash__ = None

    def __init__(self, lower: int, coeffs: list, var: str = "q"):
        self.var = var
        self.lower = lower
        self.coeffs = list(coeffs)

    # -- constructors ---------------------------------------------------
    @classmethod
    def zero(cls, order: int, var: str = "q", lower: int = 0):
        return cls(lower, [0] * (order - lower), var)

    @classmethod
    def one(cls, order: int, var: str = "q"):
        c = [0] * order
        if order > 0:
            c[0] = 1
        return cls(0, c, var)

    @classmethod
    def from_dict(cls, d: dict, lower: int, order: int, var: str = "q"):
        return cls(lower, [d.get(e, 0) for e in range(lower, order)], var)

    @property
    def order(self) -> int:
        return self.lower + len(self.coeffs)

    def coeff(self, e: int):
        if e >= self.order:
            raise ValueError(
                f"coefficient of {self.var}^{e} is beyond truncation order "
                f"{self.order}")
        if e < self.lower:
            return 0
        return self.coeffs[e - self.lower]

    def known(self, e: int) -> bool:
        return e < self.order

    def __bool__(self):
        return any(not _czero(c) for c in self.coeffs)

    def __eq__(self, other):
        """Structural equality (same var, same known window, same values)."""
        if not isinstance(other, QSeries):
            return NotImplemented
        if self.var != other.var or self.order != other.order:
            return False
        lo = min(self.lower, other.lower)
        return all(_ceq(self.coeff(e), other.coeff(e))
                   for e in range(lo, self.order))

    # -- arithmetic -------------------------------------------------------
    def __add__(self, other):
        if isinstance(other, QSeries):
            if other.var != self.var:
                raise ValueError("variable mismatch in series addition")
            lower = min(self.lower, other.lower)
            order = min(self.order, other.order)
            return QSeries(lower,
                           [_cadd(self.coeff(e), other.coeff(e))
                            for e in range(lower, order)], self.var)
        # scalar: only touches the constant coefficient
        if _czero(other):
            return self
        if self.lower > 0 or self.order <= 0:
            raise ValueError("cannot add a constant beyond the known window")
        out = list(self.coeffs)
        out[0 - self.lower] = _cadd(out[0 - self.lower], other)
        return QSeries(self.lower, out, self.var)

    __radd__ = __add__

    def __neg__(self):
        return QSeries(self.lower, [-c if not _czero(c) else 0
                                    for c in self.coeffs], self.var)

    def __sub__(self, other):
        if isinstance(other, QSeries):
            return self + (-other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, QSeries):
            if other.var != self.var:
                raise ValueError("variable mismatch in series product")
            lower = self.lower + other.lower
            order = min(self.order + other.lower, other.order + self.lower)
            n = order - lower
            out = [0] * n
            f, g = self.coeffs, other.coeffs
            for i, fc in enumerate(f):
                if _czero(fc):
                    continue
                jmax = min(len(g), n - i)
                for j in range(jmax):
                    gc = g[j]
                    if _czero(gc):
                        continue
                    out[i + j] = _cadd(out[i + j], fc * gc)
            return QSeries(lower, out, self.var)
        if _czero(other):
            return QSeries.zero(self.order, self.var, self.lower)
        return QSeries(self.lower,
                       [_cmul(c, other) for c in self.coeffs], self.var)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            return self.invert() ** (-n)
        out = None
        base = self
        while True:
            if n & 1:
                out = base if out is None else out * base
            n >>= 1
            if not n:
                break
            base = base * base
        if out is None:
            # x^0: unit to this series' order
            return QSeries.one(max(self.order, 1), self.var)
        return out

    def shift(self, k: int) -> "QSeries":
        """Multiply by var^k."""
        return QSeries(self.lower + k, self.coeffs, self.var)

    def truncate(self, order: int) -> "QSeries":
        if order > self.order:
            raise ValueError("cannot extend a truncated series")
        return QSeries(self.lower, self.coeffs[:order - self.lower], self.var)

    def drop_below(self, lower: int) -> "QSeries":
        """Forget (exactly zero) coefficients below ``lower``."""
        for e in range(self.lower, min(lower, self.order)):
            if not _czero(self.coeff(e)):
                raise ValueError("dropping a nonzero coefficient")
        if lower <= self.lower:
            return self
        return QSeries(lower, self.coeffs[lower - self.lower:], self.var)

    def map_coeffs(self, fn) -> "QSeries":
        return QSeries(self.lower,
                       [fn(c) if not _czero(c) else 0 for c in self.coeffs],
                       self.var)

    def invert(self) -> "QSeries":
        """Exact multiplicative inverse; NonUnitLeading if not a unit."""
        L = self.lower
        while L < self.order and _czero(self.coeff(L)):
            L += 1
        if L >= self.order:
            raise NonUnitLeading("cannot invert a series with no known "
                                 "nonzero coefficient")
        c0 = self.coeff(L)
        c0i = _ring_inv(c0)
        if c0i is None:
            raise NonUnitLeading(
                f"leading coefficient at {self.var}^{L} is not a unit")
        m = self.order - L  # number of valid coefficients from the lead
        a = [self.coeff(L + j) for j in range(m)]
        b = [0] * m
        b[0] = c0i
        for j in range(1, m):
            acc = 0
            for t in range(1, j + 1):
                if not _czero(a[t]) and not _czero(b[j - t]):
                    acc = _cadd(acc, a[t] * b[j - t])
            if not _czero(acc):
                b[j] = -(acc * c0i) if not isinstance(acc, int) else -(c0i * acc)
        return QSeries(-L, b, self.var)

    def log(self) -> "QSeries":
        """Exact log; requires constant term 1 and no lower terms."""
        for e in range(self.lower, min(0, self.order)):
            if not _czero(self.coeff(e)):
                raise BadConstantTerm("log needs support in [0, oo)")
        if not self.known(0) or not _is_one(self.coeff(0)):
            raise BadConstantTerm("log needs constant term exactly 1")
        n = self.order
        f = [self.coeff(e) for e in range(0, n)]
        g = [0] * n
        for k in range(1, n):
            acc = _cmul(f[k], k)
            for j in range(1, k):
                if not _czero(g[j]) and not _czero(f[k - j]):
                    acc = _cadd(acc, -_cmul(g[j] * f[k - j], j))
            g[k] = _cmul(acc, Fraction(1, k)) if not _czero(acc) else 0
        g[0] = 0
        return QSeries(0, g, self.var)

    def exp(self, one=1) -> "QSeries":
        """Exact exp; requires constant term 0 and no lower terms.

        ``one`` is the multiplicative identity of the coefficient ring
        (pass e.g. a unit QSeries for nested series coefficients).
        """
        for e in range(self.lower, min(0, self.order)):
            if not _czero(self.coeff(e)):
                raise BadConstantTerm("exp needs support in [0, oo)")
        if self.known(0) and not _czero(self.coeff(0)):
            raise BadConstantTerm("exp needs constant term exactly 0")
        n = self.order
        f = [self.coeff(e) if self.known(e) else 0 for e in range(0, n)]
        g = [0] * n
        g[0] = one
        for k in range(1, n):
            acc = 0
            for j in range(1, k + 1):
                if not _czero(f[j]) and not _czero(g[k - j]):
                    acc = _cadd(acc, _cmul(f[j] * g[k - j], j))
            g[k] = _cmul(acc, Fraction(1, k)) if not _czero(acc) else 0
        return QSeries(0, g, self.var)

    # -- comparison -------------------------------------------------------
    def agrees(self, other: "QSeries", lo: int | None = None,
               hi: int | None = None) -> bool:
        return self.first_mismatch(other, lo, hi) is None

    def first_mismatch(self, other: "QSeries", lo: int | None = None,
                       hi: int | None = None):
        """First exponent in the comparison window where the two differ.

        The window is [lo, hi) intersected with both known ranges; if a
        requested bound exceeds a known range a ValueError is raised (the
        comparison would be vacuous, which is never wanted here).
        """
        if self.var != other.var:
            raise ValueError("variable mismatch in comparison")
        start = min(self.lower, other.lower) if lo is None else lo
        stop = min(self.order, other.order) if hi is None else hi
        if stop > min(self.order, other.order):
            raise ValueError(
                f"comparison window [{start},{stop}) exceeds known orders "
                f"({self.order}, {other.order})")
        for e in range(start, stop):
            if not _ceq(self.coeff(e), other.coeff(e)):
                return e
        return None

    def assert_agrees(self, other: "QSeries", lo=None, hi=None,
                      what: str = "series"):
        e = self.first_mismatch(other, lo, hi)
        if e is not None:
            loc = {self.var: e}
            loc.update(locate_mismatch(self.coeff(e), other.coeff(e)))
            raise Mismatch(f"{what} disagree", loc)

    def __str__(self):
        terms = []
        for e in range(self.lower, self.order):
            c = self.coeff(e)
            if _czero(c):
                continue
            terms.append(f"({coeff_str(c)})*{self.var}^{e}")
        body = " + ".join(terms) if terms else "0"
        return f"{body} + O({self.var}^{self.order})"

    def __repr__(self):
        return (f"QSeries(var={self.var!r}, lower={self.lower}, "
                f"order={self.order})")


def _ceq(a, b) -> bool:
    if _czero(a) and _czero(b):
        return True
    r = (a == b)
    if r is NotImplemented:
        r = (b == a)
    return bool(r)


# -- mismatch localisation ---------------------------------------------------

def locate_mismatch(a, b) -> dict:
    """Drill into differing coefficients, returning exponent coordinates."""
    if isinstance(a, YPoly) or isinstance(b, YPoly):
        ay = a if isinstance(a, YPoly) else YPoly.const(a)
        by = b if isinstance(b, YPoly) else YPoly.const(b)
        for e in sorted(set(ay.c) | set(by.c)):
            if not _ceq(ay.coeff(e), by.coeff(e)):
                loc = {"y": e}
                loc.update(locate_mismatch(ay.coeff(e), by.coeff(e)))
                return loc
        return {}
    if isinstance(a, UPoly) or isinstance(b, UPoly):
        au = a if isinstance(a, UPoly) else UPoly.const(a)
        bu = b if isinstance(b, UPoly) else UPoly.const(b)
        for e in sorted(set(au.c) | set(bu.c)):
            if not _ceq(au.coeff(e), bu.coeff(e)):
                return {"u2": e}
        return {}
    if isinstance(a, QSeries) and isinstance(b, QSeries):
        e = a.first_mismatch(b)
        if e is not None:
            loc = {a.var: e}
            loc.update(locate_mismatch(a.coeff(e), b.coeff(e)))
            return loc
        return {}
    return {}


# -- transposes and the y -> e^{iv} substitution -----------------------------

def qmajor_to_ymajor(f: QSeries, window: int) -> YPoly:
    """QSeries with YPoly coefficients -> YPoly with QSeries coefficients."""
    cols: dict[int, dict] = {}
    for e in range(f.lower, f.order):
        c = f.coeff(e)
        if _czero(c):
            continue
        for k, v in c.c.items():
            cols.setdefault(k, {})[e] = v
    return YPoly({k: QSeries.from_dict(d, f.lower, f.order, f.var)
                  for k, d in cols.items()}, window)


def ymajor_to_qmajor(f: YPoly, window: int | None = None) -> QSeries:
    """YPoly with QSeries coefficients -> QSeries with YPoly coefficients."""
    if not f.c:
        raise ValueError("cannot transpose an empty y-polynomial "
                         "(no q-range to inherit)")
    lower = min(s.lower for s in f.c.values())
    order = min(s.order for s in f.c.values())
    w = f.window if window is None else window
    out = []
    for e in range(lower, order):
        col = {k: s.coeff(e) for k, s in f.c.items()
               if not _czero(s.coeff(e))}
        out.append(YPoly(col, w) if col else 0)
    return QSeries(lower, out, next(iter(f.c.values())).var)


def _i_pow(s: int) -> GaussianRational:
    return [GaussianRational(1), GaussianRational.i(),
            GaussianRational(-1), -GaussianRational.i()][s % 4]


def v_substitute_qmajor(f: QSeries, vorder: int) -> QSeries:
    """Substitute y -> e^{iv} in a q-major series with YPoly coefficients.

    Returns a QSeries in v whose coefficients are QSeries in q.  The v^s
    coefficient of column q^m is sum_k c_{m,k} (ik)^s / s!; scalar column
    entries become GaussianRational, UPoly entries keep their u-structure
    with GaussianRational coefficients.
    """
    fact = 1
    cols: list[list] = [[0] * (f.order - f.lower) for _ in range(vorder)]
    for s in range(vorder):
        if s:
            fact *= s
        pref = _i_pow(s) * Fraction(1, fact)
        for idx, e in enumerate(range(f.lower, f.order)):
            c = f.coeff(e)
            if _czero(c):
                continue
            acc = 0
            for k, v in c.c.items():
                w = pref * (k ** s)
                if w:
                    acc = _cadd(acc, v * w)
            cols[s][idx] = acc
    return QSeries(0, [QSeries(f.lower, col, f.var) for col in cols], "v")


def substitute_y_exp_iv(f: YPoly, vorder: int) -> QSeries:
    """Spec-shaped front end: y-major input, v-major output."""
    return v_substitute_qmajor(ymajor_to_qmajor(f), vorder)


# -- serialization ------------------------------------------------------------

def coeff_str(c) -> str:
    if isinstance(c, (int, Fraction)):
        return fraction_str(c)
    return str(c)


def qseries_json(f: QSeries) -> dict:
    return {
        "var": f.var,
        "lower": f.lower,
        "order": f.order,
        "coeffs": [coeff_str(c) for c in f.coeffs],
    }
