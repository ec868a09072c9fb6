"""Named verification suites behind the command-line interface.

Each suite is a deterministic, ordered list of checks run at the
caller's truncation orders.  A check either returns quietly or raises a
K3PairsError — identity failures carry the first differing exponent
location — and the runner stops at the first failure, returning
structured results for the caller to render and turn into an exit code.
"""

from .errors import K3PairsError, Mismatch
from .modular import (logphi_sigma_check, mpt_check,
                      v_expansion_symmetry_report, verify_psi_vs_log)
from .partition import (f_via_matrices, g_closed, g_from_f, g_via_kernels,
                        ky_product, mirror_series, to_tt_series)
from .rings import Monomial, UPoly, YPoly
from .series import locate_mismatch
from .theta import phi_bilateral, psi
from .ucomb import verify_ab_identity

__all__ = ["SUITES", "run_suite"]

SUITES = ("ucomb", "theta", "routes", "duality", "modularity", "all")


def _bilateral_unit(mono: Monomial, ywin: int) -> YPoly:
    """sum_k mono^k over the window: the two one-sided q^0 expansions of
    the kernel quotient differ by exactly this unit."""
    if mono.y == 0:
        raise ValueError("bilateral unit needs a genuine y-power")
    out = YPoly.zero(ywin)
    k = 0
    while abs(k * mono.y) <= ywin:
        mk = mono ** k
        out = out + YPoly({mk.y: UPoly.u(mk.u2, 1)}, ywin)
        if k > 0:
            mk = mono ** -k
            out = out + YPoly({mk.y: UPoly.u(mk.u2, 1)}, ywin)
        k += 1
    return out


def _theta_pair(x: Monomial, ym: Monomial, qorder: int, ywin: int) -> None:
    lhs = psi(x, ym, qorder, ywin)
    rhs = phi_bilateral(x * ym, ym.inverse(), qorder, ywin)
    for m in range(1, qorder):
        a, b = lhs.coeff(m), rhs.coeff(m)
        if a != b:
            loc = {"q": m}
            loc.update(locate_mismatch(a, b))
            raise Mismatch("theta kernel does not match the bilateral "
                           "quotient", loc)
    if qorder > 0:
        diff = rhs.coeff(0) - lhs.coeff(0)
        unit = _bilateral_unit(ym, ywin)
        if diff != unit:
            loc = {"q": 0}
            loc.update(locate_mismatch(diff, unit))
            raise Mismatch("q^0 columns of the theta kernel do not differ "
                           "by the bilateral unit", loc)


def _routes_agree(n: int, r: int, qorder: int, ywin: int) -> None:
    gc = to_tt_series(g_closed(n, r, qorder, ywin).series)
    gk = to_tt_series(g_via_kernels(n, r, qorder, ywin).series)
    gf = g_from_f(f_via_matrices(n, r, qorder, ywin)).series
    gc.assert_agrees(gk, what=f"closed and kernel routes at rank ({n}, {r})")
    gc.assert_agrees(gf, what=f"closed and matrix routes at rank ({n}, {r})")


def _duality(n: int, r: int, qorder: int, ywin: int) -> None:
    a = g_closed(n, r, qorder, ywin).series
    b = mirror_series(g_closed(n, n - r, qorder, ywin).series)
    a.assert_agrees(b, what=f"mirror duality at rank ({n}, {r})")


def _evenness(n: int, r: int, qorder: int, vorder: int) -> None:
    bad = v_expansion_symmetry_report(n, r, qorder, vorder)
    if bad:
        first = bad[0]
        raise Mismatch(
            f"v-expansion at rank ({n}, {r}) is not even/real: "
            f"cell value {first['value']}",
            {"v": first["v"], "q": first["q"]})


def _build_checks(suite: str, n: int, qorder: int, ywin: int, vorder: int,
                  cutoff: int) -> list:
    checks: list = []
    if suite in ("ucomb", "all"):
        checks.append((
            "ucomb", f"transfer-matrix product identity (index <= {cutoff})",
            lambda: verify_ab_identity(max(n, 1), cutoff)))
    if suite in ("theta", "all"):
        pairs = ((Monomial(2, 0), Monomial(0, 1)),
                 (Monomial(3, 0), Monomial(2, 1)),
                 (Monomial(-2, 2), Monomial(0, -1)))
        for idx, (x, ym) in enumerate(pairs, start=1):
            checks.append((
                "theta", f"kernel vs bilateral quotient, argument pair "
                f"{idx} of {len(pairs)}",
                lambda x=x, ym=ym: _theta_pair(x, ym, qorder, ywin)))
        checks.append(("theta", "rank-one product bridge",
                       lambda: ky_product(qorder, ywin)))
    if suite in ("routes", "all"):
        for nn in range(1, max(n, 1) + 1):
            for rr in range(nn + 1):
                checks.append((
                    "routes", f"three-route agreement at rank ({nn}, {rr})",
                    lambda nn=nn, rr=rr: _routes_agree(nn, rr, qorder, ywin)))
    if suite in ("duality", "all"):
        for nn in range(1, max(n, 1) + 1):
            for rr in range(nn + 1):
                checks.append((
                    "duality", f"mirror duality at rank ({nn}, {rr})",
                    lambda nn=nn, rr=rr: _duality(nn, rr, qorder, ywin)))
    if suite in ("modularity", "all"):
        checks.append(("modularity", "rank-one Eisenstein exponential",
                       lambda: mpt_check(qorder, vorder)))
        checks.append(("modularity", "log-product divisor-sum shadow",
                       lambda: logphi_sigma_check(qorder, vorder)))
        for k, l in ((1, 0), (1, 1), (2, 1)):
            checks.append((
                "modularity",
                f"log-product closed forms at (k, l) = ({k}, {l})",
                lambda k=k, l=l: verify_psi_vs_log(
                    k, l, qorder, min(vorder, 6), tmax=2)))
        for nn in range(1, min(max(n, 1), 3) + 1):
            for rr in range(nn + 1):
                checks.append((
                    "modularity",
                    f"v-expansion even/real at rank ({nn}, {rr})",
                    lambda nn=nn, rr=rr: _evenness(nn, rr, qorder, vorder)))
    return checks


def run_suite(suite: str, n: int = 2, qorder: int = 10, ywin: int = 8,
              vorder: int = 8, cutoff: int = 12) -> dict:
    """Run one named suite (or "all") and collect structured results.

    Stops at the first failing check; each result row carries the suite,
    the check name, and on failure the message and exact exponent
    location.  Raises ValueError for an unknown suite name.
    """
    if suite not in SUITES:
        raise ValueError(f"unknown suite {suite!r}; pick one of "
                         + ", ".join(SUITES))
    results = []
    for group, name, thunk in _build_checks(suite, n, qorder, ywin, vorder,
                                            cutoff):
        try:
            thunk()
        except K3PairsError as ex:
            results.append({
                "suite": group, "check": name, "ok": False,
                "message": str(ex),
                "location": getattr(ex, "location", None)})
            return {"suite": suite, "ok": False, "results": results}
        results.append({"suite": group, "check": name, "ok": True})
    return {"suite": suite, "ok": True, "results": results}
