"""Exact Laurent-polynomial rings.

Three sparse dict-backed rings:

* ``UPoly`` — Laurent polynomials in one variable u with half-integer
  exponents allowed.  Exponents are stored *doubled* (the key 3 means
  u^{3/2}); coefficients are int, Fraction, or GaussianRational and may mix.
* ``TTPoly`` — Laurent polynomials in two variables (t, tb), the Hodge
  variables.  u embeds as t*tb.
* ``YPoly`` — Laurent polynomials in y with coefficients in any ring that
  supports +, unary -, * and truthiness; carries an optional symmetric
  window |exponent| <= window outside which terms are dropped on purpose.

Multiplication of large integer-coefficient UPolys uses Kronecker
substitution: coefficients are packed into one big integer per sign class,
multiplied with CPython's native bignum arithmetic, and unpacked.  That is
the package's compiled core in effect, and it is exact.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd

from .errors import NotDivisible
from .scalars import GaussianRational, fraction_str

__all__ = ["UPoly", "TTPoly", "YPoly", "Monomial"]

_KRON_THRESHOLD = 2500  # len(a)*len(b) above which packing pays off


def _is_int_dict(c: dict) -> bool:
    return all(type(v) is int for v in c.values())


def _grid(c: dict, emin: int) -> int:
    g = 0
    for e in c:
        g = gcd(g, e - emin)
    return g or 1


def pack_nonneg(c: dict, emin: int, step: int, stride_bytes: int,
                slots: int) -> int:
    """Pack nonnegative int coefficients into one big integer."""
    buf = bytearray(slots * stride_bytes)
    for e, v in c.items():
        off = ((e - emin) // step) * stride_bytes
        buf[off:off + (v.bit_length() + 7) // 8] = v.to_bytes(
            (v.bit_length() + 7) // 8, "little")
    return int.from_bytes(buf, "little")


def unpack_nonneg(n: int, stride_bytes: int, slots: int, emin: int,
                  step: int) -> dict:
    """Inverse of :func:`pack_nonneg` (digits must be < 2^(8*stride_bytes))."""
    buf = n.to_bytes(slots * stride_bytes, "little")
    out = {}
    for s in range(slots):
        v = int.from_bytes(buf[s * stride_bytes:(s + 1) * stride_bytes],
                           "little")
        if v:
            out[emin + s * step] = v
    return out


def _split_signs(c: dict):
    pos, neg = {}, {}
    for e, v in c.items():
        if v > 0:
            pos[e] = v
        else:
            neg[e] = -v
    return pos, neg


def _kron_mul(a: dict, b: dict) -> dict:
    """Exact convolution of two int-coefficient exponent dicts."""
    amin, amax = min(a), max(a)
    bmin, bmax = min(b), max(b)
    step = gcd(_grid(a, amin), _grid(b, bmin))
    slots = ((amax - amin) + (bmax - bmin)) // step + 1
    maxa = max(abs(v) for v in a.values())
    maxb = max(abs(v) for v in b.values())
    overlap = min(len(a), len(b))
    stride_bits = (maxa.bit_length() + maxb.bit_length()
                   + (2 * overlap).bit_length() + 1)
    stride_bytes = (stride_bits + 7) // 8
    ap, an = _split_signs(a)
    bp, bn = _split_signs(b)

    def pk(d, emin, width):
        return pack_nonneg(d, emin, step, stride_bytes, width) if d else 0

    awidth = (amax - amin) // step + 1
    bwidth = (bmax - bmin) // step + 1
    app, anp = pk(ap, amin, awidth), pk(an, amin, awidth)
    bpp, bnp = pk(bp, bmin, bwidth), pk(bn, bmin, bwidth)
    plus = app * bpp + anp * bnp
    minus = app * bnp + anp * bpp
    out = unpack_nonneg(plus, stride_bytes, slots, amin + bmin, step) \
        if plus else {}
    if minus:
        for e, v in unpack_nonneg(minus, stride_bytes, slots, amin + bmin,
                                  step).items():
            w = out.get(e, 0) - v
            if w:
                out[e] = w
            else:
                out.pop(e, None)
    return out


def _dict_mul(a: dict, b: dict) -> dict:
    if len(a) > len(b):
        a, b = b, a
    out = {}
    for ea, va in a.items():
        for eb, vb in b.items():
            e = ea + eb
            w = out.get(e, 0) + va * vb
            if w:
                out[e] = w
            else:
                del out[e]
    return out


class UPoly:
    """Sparse Laurent polynomial in u; exponent keys are doubled."""

    __slots__ = ("c",)
    __hash__ = None

    def __init__(self, coeffs: dict | None = None):
        self.c = {e: v for e, v in (coeffs or {}).items() if v}

    # -- constructors -------------------------------------------------
    @classmethod
    def zero(cls):
        return cls()

    @classmethod
    def one(cls):
        return cls({0: 1})

    @classmethod
    def const(cls, v):
        return cls({0: v})

    @classmethod
    def u(cls, e2: int = 2, v=1):
        """The monomial v * u^{e2/2} (e2 is the doubled exponent)."""
        return cls({e2: v})

    # -- predicates / access ------------------------------------------
    def __bool__(self):
        return bool(self.c)

    def __eq__(self, other):
        if isinstance(other, UPoly):
            return self.c == other.c
        if isinstance(other, (int, Fraction, GaussianRational)):
            if not other:
                return not self.c
            return set(self.c) == {0} and self.c[0] == other
        return NotImplemented

    def coeff(self, e2: int):
        return self.c.get(e2, 0)

    def min_exp2(self) -> int:
        return min(self.c)

    def max_exp2(self) -> int:
        return max(self.c)

    def is_monomial(self) -> bool:
        return len(self.c) == 1

    # -- arithmetic ----------------------------------------------------
    def __add__(self, other):
        if isinstance(other, (int, Fraction, GaussianRational)):
            other = UPoly.const(other)
        if not isinstance(other, UPoly):
            return NotImplemented
        out = dict(self.c)
        for e, v in other.c.items():
            w = out.get(e, 0) + v
            if w:
                out[e] = w
            else:
                del out[e]
        r = UPoly.__new__(UPoly)
        r.c = out
        return r

    __radd__ = __add__

    def __neg__(self):
        r = UPoly.__new__(UPoly)
        r.c = {e: -v for e, v in self.c.items()}
        return r

    def __sub__(self, other):
        if isinstance(other, (int, Fraction, GaussianRational)):
            other = UPoly.const(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, GaussianRational)):
            if not other:
                return UPoly.zero()
            r = UPoly.__new__(UPoly)
            r.c = {e: v * other for e, v in self.c.items()}
            return r
        if not isinstance(other, UPoly):
            return NotImplemented
        a, b = self.c, other.c
        if not a or not b:
            return UPoly.zero()
        if (len(a) * len(b) >= _KRON_THRESHOLD and _is_int_dict(a)
                and _is_int_dict(b)):
            out = _kron_mul(a, b)
        else:
            out = _dict_mul(a, b)
        r = UPoly.__new__(UPoly)
        r.c = out
        return r

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power of a UPoly; invert explicitly")
        out = UPoly.one()
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def shift(self, e2: int) -> "UPoly":
        """Multiply by u^{e2/2}."""
        r = UPoly.__new__(UPoly)
        r.c = {e + e2: v for e, v in self.c.items()}
        return r

    def mul_u_integer(self, m: int) -> "UPoly":
        """Multiply by [m] = 1 + u + ... + u^{m-1} in linear time."""
        if m < 0:
            raise ValueError("m must be >= 0")
        if m == 0 or not self.c:
            return UPoly.zero()
        out = {}
        # r_e = r_{e-2} + f_e - f_{e-2m}, run per residue class mod 2.
        lo, hi = min(self.c), max(self.c) + 2 * (m - 1)
        for rho in set(e % 2 for e in self.c):
            prev = 0
            e = lo + ((rho - lo) % 2)
            while e <= hi:
                prev = prev + self.c.get(e, 0) - self.c.get(e - 2 * m, 0)
                if prev:
                    out[e] = prev
                e += 2
        r = UPoly.__new__(UPoly)
        r.c = out
        return r

    def _div_u_pow_minus_one(self, d2: int) -> "UPoly":
        """Exact division by u^{d2/2} - 1 (d2 > 0 doubled exponent)."""
        h = self.c
        if not h:
            return UPoly.zero()
        lo, hi = min(h), max(h)
        out = {}
        for rho in set(e % 2 for e in h):
            e = lo + ((rho - lo) % 2)
            while e <= hi:
                ge = out.get(e - d2, 0) - h.get(e, 0)
                if ge:
                    if e > hi - d2:
                        raise NotDivisible(
                            f"remainder in division by u^{d2}/2 - 1")
                    out[e] = ge
                e += 2
        r = UPoly.__new__(UPoly)
        r.c = out
        return r

    def div_u_minus_one(self, t: int = 1) -> "UPoly":
        """Exact division by (u - 1)^t; NotDivisible on any remainder."""
        out = self
        for _ in range(t):
            out = out._div_u_pow_minus_one(2)
        return out

    def div_u_integer(self, m: int) -> "UPoly":
        """Exact division by [m] = (u^m - 1)/(u - 1), linear time."""
        if m <= 0:
            raise ZeroDivisionError("division by [m] needs m >= 1")
        if m == 1 or not self.c:
            return self
        # f/[m] = f*(u-1)/(u^m - 1)
        h = {}
        for e, v in self.c.items():
            w = h.get(e + 2, 0) + v
            if w:
                h[e + 2] = w
            else:
                del h[e + 2]
            w = h.get(e, 0) - v
            if w:
                h[e] = w
            else:
                del h[e]
        hp = UPoly.__new__(UPoly)
        hp.c = h
        return hp._div_u_pow_minus_one(2 * m)

    def divexact(self, d: "UPoly") -> "UPoly":
        """Generic exact division (schoolbook, descending)."""
        if not d.c:
            raise ZeroDivisionError("division by zero polynomial")
        if not self.c:
            return UPoly.zero()
        num = dict(self.c)
        dtop = max(d.c)
        dlead = d.c[dtop]
        out = {}
        while num:
            ntop = max(num)
            if ntop - dtop < (min(num) - min(d.c)):
                raise NotDivisible("degree underflow in exact division")
            q = _coeff_div(num[ntop], dlead)
            e = ntop - dtop
            out[e] = q
            for ed, vd in d.c.items():
                k = ed + e
                w = num.get(k, 0) - vd * q
                if w:
                    num[k] = w
                else:
                    num.pop(k, None)
        r = UPoly.__new__(UPoly)
        r.c = out
        return r

    # -- evaluations ----------------------------------------------------
    def eval_one(self):
        """Value at u = 1."""
        s = 0
        for v in self.c.values():
            s = s + v
        return s

    def deriv_at_one(self, t: int):
        """t-th u-derivative evaluated at u = 1 (integer exponents only)."""
        if t == 0:
            return self.eval_one()
        s = 0
        for e2, v in self.c.items():
            if e2 % 2:
                raise ValueError("derivative at u=1 needs integer exponents")
            n = e2 // 2
            ff = 1
            for j in range(t):
                ff *= n - j
            if ff:
                s = s + v * ff
        return s

    def to_tt(self) -> "TTPoly":
        """Embed via u -> t*tb (integer exponents required)."""
        out = {}
        for e2, v in self.c.items():
            if e2 % 2:
                raise ValueError("u -> t*tb embedding needs integer exponents")
            out[(e2 // 2, e2 // 2)] = v
        return TTPoly(out)

    def max_abs_int(self) -> int:
        return max(abs(v) for v in self.c.values()) if self.c else 0

    # -- rendering -------------------------------------------------------
    def __str__(self):
        if not self.c:
            return "0"
        parts = []
        for e in sorted(self.c):
            v = self.c[e]
            if e == 0:
                mono = ""
            elif e == 2:
                mono = "u"
            elif e % 2 == 0:
                mono = f"u^{e // 2}"
            else:
                mono = f"u^{e}/2"
            parts.append((_coeff_str(v, bool(mono)), mono))
        out = ""
        first = True
        for cs, mono in parts:
            if first:
                term = cs + mono
                first = False
            else:
                term = ("+" if not cs.startswith("-") else "") + cs + mono
            out += term
        return out

    def __repr__(self):
        return f"UPoly({self.c!r})"


def _coeff_str(v, has_mono: bool) -> str:
    if isinstance(v, GaussianRational):
        s = str(v)
        if has_mono and (("+" in s[1:]) or ("-" in s[1:]) or s.startswith("-")):
            return f"({s})"
        if has_mono and s == "1":
            return ""
        return s
    if has_mono:
        if v == 1:
            return ""
        if v == -1:
            return "-"
    return fraction_str(v) if not isinstance(v, int) else str(v)


def _coeff_div(a, b):
    """Exact coefficient division inside whichever scalar ring applies."""
    if isinstance(a, int) and isinstance(b, int):
        q, r = divmod(a, b)
        if r:
            raise NotDivisible(f"{a} not divisible by {b}")
        return q
    if isinstance(a, GaussianRational) or isinstance(b, GaussianRational):
        return GaussianRational.coerce(a) / GaussianRational.coerce(b)
    return Fraction(a) / Fraction(b)


class TTPoly:
    """Sparse Laurent polynomial in the Hodge variables (t, tb)."""

    __slots__ = ("c",)
    __hash__ = None

    def __init__(self, coeffs: dict | None = None):
        self.c = {e: v for e, v in (coeffs or {}).items() if v}

    @classmethod
    def zero(cls):
        return cls()

    @classmethod
    def one(cls):
        return cls({(0, 0): 1})

    @classmethod
    def mono(cls, p: int, q: int, v=1):
        return cls({(p, q): v})

    def __bool__(self):
        return bool(self.c)

    def __eq__(self, other):
        if isinstance(other, TTPoly):
            return self.c == other.c
        if isinstance(other, (int, Fraction)):
            if not other:
                return not self.c
            return set(self.c) == {(0, 0)} and self.c[(0, 0)] == other
        return NotImplemented

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = TTPoly({(0, 0): other})
        if not isinstance(other, TTPoly):
            return NotImplemented
        out = dict(self.c)
        for e, v in other.c.items():
            w = out.get(e, 0) + v
            if w:
                out[e] = w
            else:
                del out[e]
        return TTPoly(out)

    __radd__ = __add__

    def __neg__(self):
        return TTPoly({e: -v for e, v in self.c.items()})

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = TTPoly({(0, 0): other})
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                return TTPoly.zero()
            return TTPoly({e: v * other for e, v in self.c.items()})
        if not isinstance(other, TTPoly):
            return NotImplemented
        a, b = self.c, other.c
        if len(a) > len(b):
            a, b = b, a
        out = {}
        for (p1, q1), va in a.items():
            for (p2, q2), vb in b.items():
                e = (p1 + p2, q1 + q2)
                w = out.get(e, 0) + va * vb
                if w:
                    out[e] = w
                else:
                    del out[e]
        return TTPoly(out)

    __rmul__ = __mul__

    def eval_ones(self):
        """Euler-characteristic specialization t = tb = 1."""
        s = 0
        for v in self.c.values():
            s = s + v
        return s

    def coeff(self, p: int, q: int):
        return self.c.get((p, q), 0)

    def all_nonneg_int(self) -> bool:
        return all(type(v) is int and v >= 0 for v in self.c.values())

    def palindromic_twist(self):
        """Return d such that coeff(p,q) == coeff(d-p, d-q) everywhere.

        The twist is read off the support (d = min+max exponent, equal in
        both variables); returns None if no such d works.
        """
        if not self.c:
            return 0
        ps = [p for p, _ in self.c]
        qs = [q for _, q in self.c]
        d1 = min(ps) + max(ps)
        d2 = min(qs) + max(qs)
        if d1 != d2:
            return None
        for (p, q), v in self.c.items():
            if self.c.get((d1 - p, d1 - q), 0) != v:
                return None
        return d1

    def __str__(self):
        if not self.c:
            return "0"
        parts = []
        for (p, q) in sorted(self.c, key=lambda e: (e[0] + e[1], e[0])):
            v = self.c[(p, q)]
            mono = "*".join(
                ([] if p == 0 else ["t" if p == 1 else f"t^{p}"])
                + ([] if q == 0 else ["tb" if q == 1 else f"tb^{q}"]))
            if mono:
                if v == 1:
                    term = mono
                elif v == -1:
                    term = "-" + mono
                else:
                    term = f"{fraction_str(v)}*{mono}"
            else:
                term = fraction_str(v)
            parts.append(term)
        out = parts[0]
        for t in parts[1:]:
            out += t if t.startswith("-") else "+" + t
        return out

    def __repr__(self):
        return f"TTPoly({self.c!r})"


class YPoly:
    """Sparse Laurent polynomial in y over an arbitrary coefficient ring.

    ``window`` (None = unbounded) is a symmetric truncation bound: terms
    with |exponent| > window are dropped on construction and after every
    operation.  Windows combine by min.
    """

    __slots__ = ("c", "window")
    __hash__ = None

    def __init__(self, coeffs: dict | None = None, window: int | None = None):
        self.window = window
        if window is None:
            self.c = {e: v for e, v in (coeffs or {}).items() if v}
        else:
            self.c = {e: v for e, v in (coeffs or {}).items()
                      if v and abs(e) <= window}

    @classmethod
    def zero(cls, window=None):
        return cls({}, window)

    @classmethod
    def const(cls, v, window=None):
        return cls({0: v}, window)

    @classmethod
    def term(cls, e: int, v, window=None):
        return cls({e: v}, window)

    def __bool__(self):
        return bool(self.c)

    def __eq__(self, other):
        if isinstance(other, YPoly):
            return self.c == other.c
        if isinstance(other, (int, Fraction, GaussianRational)):
            if not other:
                return not self.c
            return set(self.c) == {0} and self.c[0] == other
        return NotImplemented

    def coeff(self, e: int):
        return self.c.get(e, 0)

    @staticmethod
    def _merge_window(a, b):
        if a is None:
            return b
        if b is None:
            return a
        return min(a, b)

    def __add__(self, other):
        if not isinstance(other, YPoly):
            return NotImplemented
        out = dict(self.c)
        for e, v in other.c.items():
            w = out.get(e, 0) + v
            if w:
                out[e] = w
            else:
                del out[e]
        return YPoly(out, self._merge_window(self.window, other.window))

    def __neg__(self):
        return YPoly({e: -v for e, v in self.c.items()}, self.window)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, YPoly):
            w = self._merge_window(self.window, other.window)
            a, b = self.c, other.c
            if len(a) > len(b):
                a, b = b, a
            out = {}
            for ea, va in a.items():
                for eb, vb in b.items():
                    e = ea + eb
                    if w is not None and abs(e) > w:
                        continue
                    x = out.get(e, 0) + va * vb
                    if x:
                        out[e] = x
                    else:
                        out.pop(e, None)
            r = YPoly.__new__(YPoly)
            r.c, r.window = out, w
            return r
        # scalar (int / Fraction / GaussianRational / coefficient ring)
        if not other:
            return YPoly({}, self.window)
        return YPoly({e: v * other for e, v in self.c.items()}, self.window)

    __rmul__ = __mul__

    def shift_y(self, k: int) -> "YPoly":
        return YPoly({e + k: v for e, v in self.c.items()}, self.window)

    def mirror(self) -> "YPoly":
        """Substitute y -> 1/y."""
        return YPoly({-e: v for e, v in self.c.items()}, self.window)

    def map_coeffs(self, fn) -> "YPoly":
        return YPoly({e: fn(v) for e, v in self.c.items()}, self.window)

    def restrict(self, window: int) -> "YPoly":
        return YPoly(self.c, window)

    def agrees_on(self, other, window: int) -> bool:
        if not isinstance(other, YPoly):
            other = YPoly.const(other) if other else YPoly.zero()
        for e in range(-window, window + 1):
            if self.coeff(e) != other.coeff(e):
                return False
        return True

    def __str__(self):
        if not self.c:
            return "0"
        parts = []
        for e in sorted(self.c):
            v = self.c[e]
            mono = "" if e == 0 else ("y" if e == 1 else f"y^{e}")
            vs = str(v)
            if mono and ("+" in vs[1:] or "-" in vs[1:] or " " in vs):
                vs = f"({vs})"
            elif mono and vs == "1":
                vs = ""
            elif mono and vs == "-1":
                vs = "-"
            parts.append((vs + mono) if mono else vs)
        out = parts[0]
        for t in parts[1:]:
            out += t if t.startswith("-") else "+" + t
        return out

    def __repr__(self):
        return f"YPoly({self.c!r}, window={self.window!r})"


def y_agree(a, b, window: int) -> bool:
    """Window-restricted equality of y-polynomial columns.

    Either side may be a bare scalar (the series layer stores empty
    columns as plain 0).
    """
    if not isinstance(a, YPoly):
        a = YPoly.const(a) if a else YPoly.zero()
    return a.agrees_on(b, window)


class Monomial:
    """A unit monomial u^{u2/2} * y^{y} used as a theta-kernel argument."""

    __slots__ = ("u2", "y")

    def __init__(self, u2: int = 0, y: int = 0):
        self.u2 = u2
        self.y = y

    def __mul__(self, other: "Monomial") -> "Monomial":
        return Monomial(self.u2 + other.u2, self.y + other.y)

    def __pow__(self, n: int) -> "Monomial":
        return Monomial(self.u2 * n, self.y * n)

    def inverse(self) -> "Monomial":
        return Monomial(-self.u2, -self.y)

    @property
    def trivial(self) -> bool:
        return self.u2 == 0 and self.y == 0

    def __eq__(self, other):
        return (isinstance(other, Monomial)
                and self.u2 == other.u2 and self.y == other.y)

    def __hash__(self):
        return hash((self.u2, self.y))

    def __repr__(self):
        return f"Monomial(u2={self.u2}, y={self.y})"
