"""u-combinatorics: u-integers, u-binomials, the symmetric variants, the
finite Grassmannian-product kernels, and the three upper-triangular matrices
(with their closed-form entries) whose product identity drives the
section-counting recursion.

Matrix conventions (all entries UPoly, rows/columns indexed from 0, entry
(i, j) nonzero only for j - i = 2*l >= 0):

    A(n)[k, k+2l] = qbinom(k+l, n) * qbinom(k+2l, l)
    B[k, k+2l]    = (-1)^l u^(l(l-1)/2) * ( [k+2l] * qbinom(k+l, l) ) / [k+l]
    P(n)[k, k+2l] = u^(l^2+l(k-n)) * ( [k+2l] * qbinom(n+l, n)
                                       * qbinom(k+l-1, n-1) ) / [n+l]
    P(0) = identity.

The B and P entries are computed exactly as displayed: full numerator
product first, then one exact division (the individual ratio [k+2l]/[k+l]
is generally not a polynomial).  Divisions are linear-time via the
u-integer division trick in rings.UPoly; a failed division is a bug and
raises InternalNonExactDivision.
"""

from __future__ import annotations

from functools import lru_cache

from .errors import InternalNonExactDivision, Mismatch, NotDivisible
from .rings import UPoly, pack_nonneg
from .scalars import binomial

__all__ = [
    "u_integer",
    "u_factorial",
    "u_binomial",
    "sym_u_binomial",
    "k_series",
    "matrix_entry",
    "matrix_product_entry",
    "CTable",
    "c_table",
    "verify_ab_identity",
]


@lru_cache(maxsize=None)
def u_integer(n: int) -> UPoly:
    """[n] = 1 + u + ... + u^{n-1}  (the u-analog of n; [0] = 0)."""
    if n < 0:
        raise ValueError("u_integer is defined for n >= 0")
    return UPoly({2 * j: 1 for j in range(n)})


@lru_cache(maxsize=None)
def u_factorial(n: int) -> UPoly:
    """[n]! = [1][2]...[n], with [0]! = 1."""
    if n < 0:
        raise ValueError("u_factorial is defined for n >= 0")
    if n == 0:
        return UPoly.one()
    return u_factorial(n - 1).mul_u_integer(n)


@lru_cache(maxsize=None)
def u_binomial(n: int, k: int) -> UPoly:
    """Gaussian binomial [n choose k]; zero outside 0 <= k <= n or n < 0.

    Degree k(n-k), nonnegative integer coefficients, built by alternating
    window-multiplications and exact divisions so every intermediate stays
    a polynomial.
    """
    if k < 0 or n < 0 or k > n:
        return UPoly.zero()
    k = min(k, n - k)
    out = UPoly.one()
    for j in range(1, k + 1):
        out = out.mul_u_integer(n - k + j).div_u_integer(j)
    return out


@lru_cache(maxsize=None)
def sym_u_binomial(n: int, k: int) -> UPoly:
    """Symmetrized binomial {n, k} = u^{-k(n-k)/2} [n choose k].

    Extended to negative upper index by {-n, k} = (-1)^k {n+k-1, k}.
    """
    if k < 0:
        return UPoly.zero()
    if n < 0:
        base = sym_u_binomial(-n + k - 1, k)
        return base if k % 2 == 0 else -base
    return u_binomial(n, k).shift(-k * (n - k))


def k_series(n: int, t_cutoff: int) -> list[UPoly]:
    """Coefficients (in t^0..t^{t_cutoff}) of the balanced product kernel.

    For n >= 0 this is prod_{s=0}^{n-1} (1 + t u^{s-(n-1)/2}), a polynomial
    whose t^k coefficient is {n, k}; for n < 0 it is the t-power-series
    inverse of the |n| kernel.
    """
    if t_cutoff < 0:
        raise ValueError("t_cutoff must be >= 0")
    if n >= 0:
        coeffs = [UPoly.one()] + [UPoly.zero()] * t_cutoff
        for s in range(n):
            shift = 2 * s - (n - 1)  # doubled exponent of u^{s-(n-1)/2}
            for k in range(min(s + 1, t_cutoff), 0, -1):
                coeffs[k] = coeffs[k] + coeffs[k - 1].shift(shift)
        return coeffs
    fwd = k_series(-n, t_cutoff)
    inv = [UPoly.one()] + [UPoly.zero()] * t_cutoff
    for k in range(1, t_cutoff + 1):
        acc = UPoly.zero()
        for j in range(1, k + 1):
            acc = acc + fwd[j] * inv[k - j]
        inv[k] = -acc
    return inv


def _entry_B(k: int, l: int) -> UPoly:
    if l == 0:
        return UPoly.one()
    try:
        core = (u_integer(k + 2 * l) * u_binomial(k + l, l)) \
            .div_u_integer(k + l)
    except NotDivisible as e:  # pragma: no cover - contract guarantee
        raise InternalNonExactDivision(f"B entry ({k},{k + 2 * l})") from e
    core = core.shift(l * (l - 1))  # u^{binom(l,2)}
    return -core if l % 2 else core


def _entry_P(n: int, k: int, l: int) -> UPoly:
    if n == 0:
        return UPoly.one() if l == 0 else UPoly.zero()
    num = u_integer(k + 2 * l) * u_binomial(n + l, n) \
        * u_binomial(k + l - 1, n - 1)
    if not num:
        return UPoly.zero()
    try:
        core = num.div_u_integer(n + l)
    except NotDivisible as e:  # pragma: no cover - contract guarantee
        raise InternalNonExactDivision(f"P({n}) entry ({k},{k + 2 * l})") \
            from e
    return core.shift(2 * (l * l + l * (k - n)))


@lru_cache(maxsize=None)
def matrix_entry(kind: str, i: int, j: int, n: int | None = None) -> UPoly:
    """Closed-form entry (i, j) of A(n), B, or P(n)."""
    if i < 0 or j < i or (j - i) % 2:
        return UPoly.zero()
    l = (j - i) // 2
    if kind == "A":
        if n is None:
            raise ValueError("A needs the parameter n")
        return u_binomial(i + l, n) * u_binomial(j, l)
    if kind == "B":
        return _entry_B(i, l)
    if kind == "P":
        if n is None:
            raise ValueError("P needs the parameter n")
        return _entry_P(n, i, l)
    raise ValueError(f"unknown matrix kind {kind!r}")


def matrix_product_entry(n: int, i: int, j: int) -> UPoly:
    """(A(n) . B)[i, j] computed as the actual finite product-sum."""
    if i < 0 or j < i or (j - i) % 2:
        return UPoly.zero()
    acc = UPoly.zero()
    for m in range(i, j + 1, 2):
        a = matrix_entry("A", i, m, n)
        if not a:
            continue
        b = matrix_entry("B", m, j)
        if b:
            acc = acc + a * b
    return acc


# -- the C-table ---------------------------------------------------------------

class CTable:
    """Triangular coefficient table of theta-kernel weights.

    Entries live on 1 <= i <= n, 0 <= j <= n - i; everything outside is
    zero.  Built from the single seed C(1, 0) = 1 at n = 1 by the two-term
    shift recursion; entries are UPoly in u with the rank parameter r baked
    in.
    """

    def __init__(self, n: int, r: int, entries: dict):
        self.n = n
        self.r = r
        self.entries = entries

    def entry(self, i: int, j: int) -> UPoly:
        return self.entries.get((i, j), UPoly.zero())

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "r": self.r,
            "entries": [
                {"i": i, "j": j, "poly": str(self.entries[(i, j)])}
                for (i, j) in sorted(self.entries)
            ],
        }


def c_table(n: int, r: int) -> CTable:
    """Build the weight table at level n, rank parameter r."""
    if n < 1:
        raise ValueError("the table starts at n = 1")
    cur = {(1, 0): UPoly.one()}
    for m in range(1, n):
        # pass from level m to level m+1
        nxt: dict = {}
        up = 2 * (r - m)   # doubled exponent of u^{r-m}
        dn = 2 * (m - r)
        for i in range(1, m + 2):
            for j in range(0, m + 2 - i):
                acc = UPoly.zero()
                e = cur.get((i - 1, j))
                if e:
                    acc = acc + e
                e = cur.get((i + 1, j - 1))
                if e:
                    acc = acc + e
                e = cur.get((i, j - 1))
                if e:
                    acc = acc - e.shift(up)
                e = cur.get((i, j))
                if e:
                    acc = acc - e.shift(dn)
                if acc:
                    nxt[(i, j)] = acc
        cur = nxt
    return CTable(n, r, cur)


# -- fast exact verification of A(n)B = P(n) -----------------------------------

def _pack_on_grid(p: UPoly, emin: int, slots: int, stride_bytes: int):
    """Pack a UPoly (split by sign) onto the common doubled-exp grid."""
    pos, neg = {}, {}
    for e, v in p.c.items():
        (pos if v > 0 else neg)[e] = abs(v)
    pp = pack_nonneg(pos, emin, 2, stride_bytes, slots) if pos else 0
    np_ = pack_nonneg(neg, emin, 2, stride_bytes, slots) if neg else 0
    return pp, np_


def verify_ab_identity(n_max: int, index_max: int) -> int:
    """Assert A(n).B == P(n) entrywise for 0 <= n <= n_max on the index
    square [0, index_max]; returns the number of entries checked.

    The sum over the middle index is carried out on Kronecker-packed
    integers: per cell only big-integer multiplies and adds happen, and the
    final comparison is a single integer equality (exact because all packed
    digits stay below the stride bound by construction).
    """
    checked = 0
    for i in range(0, index_max + 1):
        for j in range(i, index_max + 1, 2):
            lmax = (j - i) // 2
            bs = [matrix_entry("B", i + 2 * s, j) for s in range(lmax + 1)]
            for n in range(0, n_max + 1):
                target = matrix_entry("P", i, j, n)
                terms = []
                bound = target.max_abs_int()
                emin = min(target.c) if target.c else 0
                emax = max(target.c) if target.c else 0
                for s in range(lmax + 1):
                    a = matrix_entry("A", i, i + 2 * s, n)
                    b = bs[s]
                    if not a or not b:
                        continue
                    terms.append((a, b))
                    bound += (a.max_abs_int() * b.max_abs_int()
                              * min(len(a.c), len(b.c)))
                    emin = min(emin, min(a.c) + min(b.c))
                    emax = max(emax, max(a.c) + max(b.c))
                stride_bytes = (bound.bit_length() + 8) // 8 + 1
                slots = (emax - emin) // 2 + 1
                acc_plus = acc_minus = 0
                for a, b in terms:
                    sh = ((min(a.c) + min(b.c)) - emin) // 2
                    wa = (max(a.c) - min(a.c)) // 2 + 1
                    wb = (max(b.c) - min(b.c)) // 2 + 1
                    ap, an = _pack_on_grid(a, min(a.c), wa, stride_bytes)
                    bp, bn = _pack_on_grid(b, min(b.c), wb, stride_bytes)
                    shift = 8 * stride_bytes * sh
                    plus = ap * bp + an * bn
                    minus = ap * bn + an * bp
                    if plus:
                        acc_plus += plus << shift
                    if minus:
                        acc_minus += minus << shift
                tp, tn = _pack_on_grid(target, emin, slots, stride_bytes)
                if acc_plus + tn != acc_minus + tp:
                    diff = matrix_product_entry(n, i, j) - target
                    raise Mismatch(
                        f"A({n}).B differs from P({n})",
                        {"row": i, "col": j,
                         "u2": min(diff.c) if diff else 0})
                checked += 1
    return checked
