"""Exact and numeric tools for the X2 quasi-solvable operators and the
N-fold supersymmetric Hamiltonians built on them.

Modules, bottom up: ``exactalg`` (rationals, polynomials, differential
operators), ``x2spaces`` (the two polynomial families), ``quasiops`` (the
preserving operators J1-J4, K1-K4 and the Hamiltonians), ``susybuild``
(gauged supercharges), ``qalgebra`` (exact q-space algebra), ``models``
(the rational and hyperbolic potentials), ``laguerre`` (eigenpolynomials)
and ``verify``/``cli``.
"""

from .exactalg import DomainError, LinDiffOp, Poly, RatFunc, rat
from .x2spaces import ParamContext, ParamError, chi_bar, f_poly, phi_tilde

__version__ = "0.1.0"

__all__ = [
    "DomainError",
    "LinDiffOp",
    "Poly",
    "RatFunc",
    "rat",
    "ParamContext",
    "ParamError",
    "chi_bar",
    "f_poly",
    "phi_tilde",
]
