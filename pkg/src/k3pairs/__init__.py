"""Exact-arithmetic toolkit for stable-pair counting series on K3 surfaces.

Everything in here is exact: big integers, big rationals, Gaussian
rationals, Laurent polynomials, and truncated Laurent series with honest
truncation-order bookkeeping.  No floats anywhere.
"""

__version__ = "0.1.0"

from . import errors  # noqa: F401
from .modular import EisensteinBasis, b_series, eisenstein_even, \
    eisenstein_odd_q2, fit_in_R, fit_v_coefficient, logphi_sigma_check, \
    mpt_check, psi_kls, psi_kls_derivative, psi_kls_sym, sigma_series, \
    v_partition_series, verify_psi_vs_log  # noqa: F401
from .partition import MukaiVector, PartitionFunction, euler_g, \
    f_via_matrices, g_closed, g_from_f, g_via_kernels, hilb_hodge, \
    ky_product, moduli_dim, mukai_pairing, s_series, stratum_hodge, \
    syst_euler, syst_hodge  # noqa: F401
from .rings import Monomial, TTPoly, UPoly, YPoly  # noqa: F401
from .scalars import GaussianRational, bernoulli, binomial, \
    secant_number  # noqa: F401
from .series import QSeries  # noqa: F401
