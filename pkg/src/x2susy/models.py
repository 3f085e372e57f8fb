"""Numeric realizations of the rational (``A = a1 z``) and hyperbolic
(``A = a2 (z^2 + zeta^2)``) models.

Closed-form evaluators are written out per model and compared against the
exact ``qalgebra`` Hamiltonians evaluated along ``z(q)``.
"""

from __future__ import annotations

import contextlib
import csv
import json
import math
import os
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence

import mpmath
import numpy as np

from .exactalg import DomainError, Poly, RatFunc, rat
from .x2spaces import ParamContext, ParamError, chi_bar, f_poly, phi_tilde

__all__ = [
    "UnsupportedBranchError",
    "Numerics",
    "default_precision",
    "PhysicalModel",
    "SectorFunction",
    "make_model",
    "change_of_variable",
    "algebra_potential",
    "np_ratfunc",
    "gd",
    "gd_self_test",
    "shape_invariance_check",
    "sector_functions",
    "sector_preservation_numeric",
    "susy_breaking_classification",
    "sector_l2_report",
    "scaling_relation_check",
    "potential_crosscheck",
    "gauge_potential_check",
    "rayleigh_check",
    "eigenfunction_residuals",
    "no_singularity_check",
    "classify_potential_type",
    "export_tables",
    "second_derivative_5pt",
    "second_derivative_richardson",
    "first_derivative_5pt",
    "default_grid",
]


class UnsupportedBranchError(ParamError):
    """Parameters fall in a branch that is not implemented."""


def default_precision() -> int:
    """Binary precision for closed-form evaluation; ``X2SUSY_PREC_BITS`` overrides 53."""
    return int(os.environ.get("X2SUSY_PREC_BITS", "53"))


class Numerics:
    """Elementwise kernels at a fixed binary precision.

    53 bits maps straight onto numpy float64.  Anything else uses object
    arrays of ``mpmath.mpf`` and must be driven inside :meth:`context`, since
    mpmath rounds every operation to the working precision of the moment.
    """

    _names = ("sinh", "cosh", "tanh", "exp", "log", "sqrt")

    def __init__(self, prec: int = 53):
        if prec < 53:
            raise ValueError("precision below 53 bits is not supported")
        self.prec = int(prec)
        self.native = self.prec == 53
        if not self.native:
            for name in self._names:
                setattr(self, name, np.frompyfunc(getattr(mpmath, name), 1, 1))
            self.arctan = np.frompyfunc(mpmath.atan, 1, 1)
        else:
            for name in self._names + ("arctan",):
                setattr(self, name, getattr(np, name))

    def context(self):
        return contextlib.nullcontext() if self.native else mpmath.workprec(self.prec)

    def asarray(self, q):
        if self.native:
            return np.asarray(q, dtype=float)
        arr = np.asarray(q)
        return np.frompyfunc(mpmath.mpf, 1, 1)(arr) if arr.shape else mpmath.mpf(arr.item())

    def const(self, x):
        """Exact rationals round once to the working precision."""
        if self.native:
            return float(x)
        if isinstance(x, Fraction):
            return mpmath.mpf(x.numerator) / x.denominator
        return mpmath.mpf(x)

    def abs(self, x):
        return np.abs(x)

    def to_float(self, x):
        return np.asarray(x, dtype=float)


_NATIVE = Numerics(53)


def gd(q, num: Numerics = _NATIVE):
    """Gudermann function ``arctan(sinh q)``."""
    return num.arctan(num.sinh(q))


def np_ratfunc(r: RatFunc, num: Numerics = _NATIVE) -> Callable:
    """Horner evaluation of a reduced ratio with coefficients rounded once."""
    nc, dc = list(r.num.coeffs) or [Fraction(0)], list(r.den.coeffs)

    def horner(coeffs, x):
        out = num.const(coeffs[-1])
        for c in reversed(coeffs[:-1]):
            out = out * x + num.const(c)
        return out

    def ev(x):
        with num.context():
            x = num.asarray(x)
            return horner(nc, x) / horner(dc, x)

    return ev


def np_poly(p: Poly) -> Callable:
    c = np.array([float(x) for x in reversed(p.coeffs)] or [0.0])
    return lambda x: np.polyval(c, x)


def _f(alpha: float):
    return lambda z: z * z + 2 * (alpha - 1) * z + (alpha - 1) * alpha


def second_derivative_5pt(fn: Callable, q, h: float = 1e-3):
    return (-fn(q + 2 * h) + 16 * fn(q + h) - 30 * fn(q) + 16 * fn(q - h) - fn(q - 2 * h)) / (12 * h * h)


def second_derivative_richardson(fn: Callable, q, h: float = 1e-3):
    """One Richardson step on the 5-point stencil, ``(16 D(h/2) - D(h)) / 15``."""
    return (16 * second_derivative_5pt(fn, q, h / 2) - second_derivative_5pt(fn, q, h)) / 15


def first_derivative_5pt(fn: Callable, q, h: float = 1e-3):
    return (-fn(q + 2 * h) + 8 * fn(q + h) - 8 * fn(q - h) + fn(q - 2 * h)) / (12 * h)


def classify_potential_type(ctx: ParamContext) -> str:
    """Functional type of ``V`` from the pattern of nonzero ``a_i``."""
    nz = tuple(x != 0 for x in ctx.a)
    table = {
        (True, False, False, False): "rational",
        (False, False, False, True): "rational",
        (True, True, False, False): "exponential",
        (False, True, False, False): "trigonometric or hyperbolic",
        (False, False, True, False): "trigonometric or hyperbolic",
        (False, False, True, True): "trigonometric or hyperbolic",
    }
    if not any(nz):
        raise ParamError("all a_i vanish")
    return table.get(nz, "elliptic")


def change_of_variable(ctx: ParamContext, num: Numerics = _NATIVE):
    """``(z(q), z'(q))`` for the two implemented patterns.

    ``a1`` only: ``z = a1 q^2 / 2`` on ``q > 0``.  ``a2`` only with
    ``zeta^2 = (a-1)(a+N-1) > 0``: ``z = zeta sinh(sqrt(2 a2) q)``.
    """
    if ctx.a1 > 0 and ctx.a2 == ctx.a3 == ctx.a4 == 0:
        with num.context():
            a1 = num.const(ctx.a1)

        def z(q):
            with num.context():
                q = num.asarray(q)
                return a1 * q * q / 2

        def zp(q):
            with num.context():
                return a1 * num.asarray(q)

        return z, zp
    if ctx.a2 > 0 and ctx.a1 == ctx.a3 == ctx.a4 == 0:
        zeta2 = (ctx.alpha - 1) * (ctx.alpha + ctx.enn - 1)
        if zeta2 <= 0:
            raise UnsupportedBranchError(
                "zeta^2 = (alpha-1)(alpha+enn-1) = %s <= 0: the zeta^2 < 0 branch (z = |zeta| cosh q, half-line domain) is not implemented" % zeta2
            )
        with num.context():
            zeta = num.sqrt(num.const(zeta2))
            k = num.sqrt(2 * num.const(ctx.a2))

        def z(q):
            with num.context():
                return zeta * num.sinh(k * num.asarray(q))

        def zp(q):
            with num.context():
                return zeta * k * num.cosh(k * num.asarray(q))

        return z, zp
    raise ParamError("no closed-form change of variable for this a_i pattern")


def algebra_potential(ctx: ParamContext, sign, num: Numerics = _NATIVE) -> Callable:
    """``V^{+-}(q)`` from the exact order-0 term of ``H^{+-}`` along ``z(q)``."""
    from .qalgebra import build_physical_H

    H = build_physical_H(ctx, sign)
    pot = H.coeff(0)
    if not pot.odd.is_zero():
        raise ArithmeticError("potential has an odd part")
    ev = np_ratfunc(pot.even, num)
    z, _ = change_of_variable(ctx, num)

    def V(q):
        with num.context():
            return ev(z(num.asarray(q)))

    return V


def _algebra_odd(ctx: ParamContext, element, num: Numerics = _NATIVE) -> Callable:
    z, zp = change_of_variable(ctx, num)
    e, o = np_ratfunc(element.even, num), np_ratfunc(element.odd, num)

    def ev(q):
        with num.context():
            q = num.asarray(q)
            return e(z(q)) + o(z(q)) * zp(q)

    return ev


@dataclass(frozen=True)
class SectorFunction:
    """``poly_part(z(q))`` times a closed-form gauge factor.

    Rational model: ``q^q_power * exp(exp_coeff * q^2) / f(z; f_alpha)``.
    Hyperbolic model: ``exp(exp_coeff * (zeta sinh q / 2 + zeta gd q)) /
    (cosh q)^cosh_power / f(z; f_alpha)``.
    """

    poly_part: Poly
    kind: str
    exp_coeff: float
    f_alpha: Fraction
    q_power: float = 0.0
    cosh_power: float = 0.0
    zeta: float = 0.0
    scale: float = 1.0

    def gauge(self, q):
        fa = _f(float(self.f_alpha))
        if self.kind == "rational":
            return q ** self.q_power * np.exp(self.exp_coeff * q * q) / fa(self.z(q))
        arg = self.zeta * np.sinh(q) / 2 + self.zeta * gd(q)
        return np.exp(self.exp_coeff * arg) / np.cosh(q) ** self.cosh_power / fa(self.z(q))

    def z(self, q):
        if self.kind == "rational":
            return q * q
        return self.zeta * np.sinh(q)

    def __call__(self, q):
        q = np.asarray(q, dtype=float)
        return self.scale * np_poly(self.poly_part)(self.z(q)) * self.gauge(q)

    def square_integrable(self, endpoint: str) -> bool:
        """Asymptotic exponent test of ``|psi|^2`` at one domain endpoint."""
        if self.kind == "rational":
            if endpoint == "0":
                # z^low of the polynomial part, f(0) = a(a-1) != 0
                low = self.poly_part.low_order()
                return 2 * (self.q_power + 2 * low) > -1
            if endpoint == "+inf":
                if self.exp_coeff != 0:
                    return self.exp_coeff < 0
                return 2 * (self.q_power + 2 * (self.poly_part.degree - 2)) < -1
        else:
            # exp(c zeta sinh q / 2) dominates every power of cosh q
            direction = 1 if endpoint == "+inf" else -1
            return self.exp_coeff * self.zeta * direction < 0
        raise ValueError("unknown endpoint %r" % endpoint)


@dataclass
class PhysicalModel:
    """Closed-form ``E, W, F``, gauge potentials and ``V^{+-}`` of one model.

    ``num`` fixes the binary precision of ``E, W, F, V`` and ``z``; the gauge
    potentials and sector functions stay in float64, where their finite
    difference checks live anyway.
    """

    example_id: int
    ctx: ParamContext
    zeta: Optional[float]
    domain: tuple
    z: Callable = field(repr=False)
    zp: Callable = field(repr=False)
    num: Numerics = field(default=_NATIVE, repr=False)

    @property
    def endpoints(self):
        return ("0", "+inf") if self.example_id == 1 else ("-inf", "+inf")

    @property
    def precision(self) -> int:
        return self.num.prec

    def _consts(self):
        xp = self.num
        a, c0 = xp.const(self.ctx.alpha), xp.const(self.ctx.c0)
        zt = None
        if self.example_id == 2:
            zt = xp.sqrt(xp.const((self.ctx.alpha - 1) * (self.ctx.alpha + self.ctx.enn - 1)))
        return a, self.ctx.enn, c0, zt

    # closed-form evaluators -------------------------------------------------

    def E(self, q):
        xp = self.num
        with xp.context():
            q = xp.asarray(q)
            return 1 / q if self.example_id == 1 else xp.tanh(q)

    def W(self, q):
        xp = self.num
        with xp.context():
            q = xp.asarray(q)
            a, N, _, zt = self._consts()
            f = _f(a)
            if self.example_id == 1:
                return q - (2 * a + N - 8) / (2 * q) - 4 * (a - 1) * (q * q + a) / (f(q * q) * q)
            s, c = xp.sinh(q), xp.cosh(q)
            return (
                zt / 2 * c
                + 3 * xp.tanh(q) / 2
                + (a - 1) * (a + N - 3) / (zt * c)
                + ((2 * a + N - 3) * zt * s + (a - 1) * (2 * a + N - 1)) * 2 * (a - 1) / (f(zt * s) * zt * c)
            )

    def F(self, alpha, q):
        xp = self.num
        with xp.context():
            q = xp.asarray(q)
            b = xp.const(rat(alpha))
            z = self.z(q)
            return (2 * z + 2 * (b - 1)) / _f(b)(z) * self.zp(q)

    def gauge_potential(self, sign, q):
        s = 1 if sign in ("+", 1) else -1
        q = np.asarray(q, dtype=float)
        a, N = float(self.ctx.alpha), self.ctx.enn
        f = _f(a)
        if self.example_id == 1:
            return -s * q * q / 2 + s * (2 * a + N + s * N - s) / 2 * np.log(np.abs(q)) - s * np.log(np.abs(f(q * q)))
        zt = self.zeta
        return (
            -s * zt / 2 * np.sinh(q)
            - s * zt * gd(q)
            + (N - 1 + s) / 2 * np.log(np.abs(np.cosh(q)))
            - s * np.log(np.abs(f(zt * np.sinh(q))))
        )

    def V(self, sign, q):
        s = 1 if sign in ("+", 1) else -1
        xp = self.num
        with xp.context():
            q = xp.asarray(q)
            a, N, c0, zt = self._consts()
            if self.example_id == 1:
                b = a if s == -1 else a + N
                f = _f(b)
                q2 = q * q
                const = -a + 3 - c0 if s == -1 else -a + N + 3 - c0
                return q2 / 2 + (4 * b * b - 1) / (8 * q2) + 4 * ((q2 - b + 1) / f(q2) - 4 * (b - 1) * q2 / f(q2) ** 2) + const
            sh, ch = xp.sinh(q), xp.cosh(q)
            zs = zt * sh
            common = zt**2 / 8 * ch**2 + (4 * a * a + 4 * (N - 4) * a + N * N + 16) / 8 - c0
            if s == -1:
                f = _f(a)(zs)
                return (
                    common
                    - (N + 1) * zs / 4
                    + (4 * (N - 1) * zs + 4 * a * a + 4 * (N - 2) * a - N * N - 2 * N + 4) / (8 * ch**2)
                    - 2 * (a - 1) * ((zs - a - N + 3) / f - 2 * (a - 1) * (2 * zs - N + 1) / f**2)
                )
            f = _f(a + N)(zs)
            return (
                common
                + (N - 1) * zs / 4
                - (4 * (N + 1) * zs - 4 * a * a - 4 * (N - 2) * a + N * N + 6 * N - 4) / (8 * ch**2)
                - 2 * (a + N - 1) * ((zs - a + 3) / f - 2 * (a + N - 1) * (2 * zs + N + 1) / f**2)
            )

    def V_minus(self, q):
        return self.V("-", q)

    def V_plus(self, q):
        return self.V("+", q)


def make_model(example_id: int, ctx: ParamContext, prec: Optional[int] = None) -> PhysicalModel:
    """Build one of the two worked models; ``prec`` is the binary precision
    of the closed-form evaluators (default :func:`default_precision`)."""
    num = Numerics(prec or default_precision())
    if ctx.alpha <= 1:
        raise UnsupportedBranchError(
            "alpha = %s <= 1: only the alpha > 1 branch is implemented (the zeta^2 < 0 branch is not supported)" % ctx.alpha
        )
    if example_id == 1:
        if not (ctx.a1 == 2 and ctx.a2 == ctx.a3 == ctx.a4 == 0):
            raise ParamError("the rational model needs a1 = 2, a2 = a3 = a4 = 0")
        z, zp = change_of_variable(ctx, num)
        return PhysicalModel(1, ctx, None, (0.0, math.inf, "open", "open"), z, zp, num)
    if example_id == 2:
        if not (ctx.a2 == Fraction(1, 2) and ctx.a1 == ctx.a3 == ctx.a4 == 0):
            raise ParamError("the hyperbolic model needs a2 = 1/2, a1 = a3 = a4 = 0")
        z, zp = change_of_variable(ctx, num)
        zeta = math.sqrt(float((ctx.alpha - 1) * (ctx.alpha + ctx.enn - 1)))
        return PhysicalModel(2, ctx, zeta, (-math.inf, math.inf, "open", "open"), z, zp, num)
    raise ParamError("example_id must be 1 or 2")


def gd_self_test(q=None, h: float = 1e-3, tol: float = 1e-10) -> dict:
    if q is None:
        q = np.linspace(-4, 4, 401)
    err = np.max(np.abs(first_derivative_5pt(gd, q, h) - 1 / np.cosh(q)))
    return {"max_error": float(err), "ok": bool(err < tol)}


def _rel(a, b) -> float:
    """Max of ``|a - b| / max(1, |b|)``; mpf inputs are differenced before rounding."""
    a, b = np.atleast_1d(np.asarray(a)), np.atleast_1d(np.asarray(b))
    d = np.abs(a - b).astype(float)
    return float(np.max(d / np.maximum(1.0, np.abs(b).astype(float))))


def default_grid(model: PhysicalModel, n: int = 100):
    if model.example_id == 1:
        return np.linspace(0.3, 5.0, n)
    return np.linspace(-3.0, 3.0, n)


def potential_crosscheck(model: PhysicalModel, q=None) -> dict:
    """Closed-form ``V, E, W, F`` vs the exact algebra, relative error."""
    from .qalgebra import physical_functions

    q = default_grid(model) if q is None else np.asarray(q, dtype=float)
    pf = physical_functions(model.ctx)
    errs = {
        "V_minus": _rel(model.V("-", q), algebra_potential(model.ctx, "-", model.num)(q)),
        "V_plus": _rel(model.V("+", q), algebra_potential(model.ctx, "+", model.num)(q)),
        "E": _rel(model.E(q), _algebra_odd(model.ctx, pf.E, model.num)(q)),
        "W": _rel(model.W(q), _algebra_odd(model.ctx, pf.W, model.num)(q)),
        "F": _rel(model.F(model.ctx.alpha + 1, q), _algebra_odd(model.ctx, pf.F(model.ctx.alpha + 1), model.num)(q)),
    }
    return {"errors": errs, "max_error": max(errs.values()), "ok": max(errs.values()) < 1e-12}


def gauge_potential_check(model: PhysicalModel, q=None, h: float = 1e-3) -> dict:
    """``d/dq`` of the closed-form gauge potentials vs ``(N-1)/2 E -+ W``."""
    q = default_grid(model) if q is None else np.asarray(q, dtype=float)
    N = model.ctx.enn
    out = {}
    for s, sign in ((1, "+"), (-1, "-")):
        num = first_derivative_5pt(lambda x: model.gauge_potential(sign, x), q, h)
        exact = (N - 1) / 2 * model.num.to_float(model.E(q)) - s * model.num.to_float(model.W(q))
        out[sign] = _rel(num, exact)
    return {"errors": out, "ok": max(out.values()) < 1e-6}


def shape_invariance_check(ctx: ParamContext, q=None) -> dict:
    """``V+(q; a) - V-(q; a+N)`` for the rational model."""
    m1 = make_model(1, ctx)
    m2 = make_model(1, ctx.replace(alpha=ctx.alpha + ctx.enn))
    q = np.linspace(0.2, 6.0, 100) if q is None else np.asarray(q, dtype=float)
    diff = m1.V("+", q) - m2.V("-", q)
    # exact: the same difference from the algebra, reduced over z
    from .qalgebra import build_physical_H

    hp = build_physical_H(ctx, "+").coeff(0).even
    hm = build_physical_H(ctx.replace(alpha=ctx.alpha + ctx.enn), "-").coeff(0).even
    exact = hp - hm
    return {
        "mean": float(np.mean(diff)),
        "std": float(np.std(diff, ddof=1)),
        "expected": 2 * ctx.enn,
        "exact_difference": str(exact.num.coeff(0)) if exact.is_poly() and exact.num.degree <= 0 else repr(exact),
        "exact_is_constant": exact.is_poly() and exact.num.degree <= 0,
    }


def sector_functions(model: PhysicalModel, sign) -> List[SectorFunction]:
    s = 1 if sign in ("+", 1) else -1
    a, N = model.ctx.alpha, model.ctx.enn
    out = []
    for n in range(1, N + 1):
        if model.example_id == 1:
            if s == -1:
                out.append(SectorFunction(phi_tilde(n, a), "rational", -0.5, a, q_power=float(a) + 0.5))
            else:
                out.append(SectorFunction(chi_bar(n, a + N), "rational", 0.5, a + N, q_power=-float(a + N) + 0.5))
        else:
            if s == -1:
                out.append(SectorFunction(phi_tilde(n, a), "hyperbolic", -1.0, a, cosh_power=N / 2 - 1, zeta=model.zeta))
            else:
                out.append(SectorFunction(chi_bar(n, a + N), "hyperbolic", 1.0, a + N, cosh_power=N / 2, zeta=model.zeta))
    return out


def _schrodinger(model: PhysicalModel, sign, psi: Callable, q, h: float, richardson: bool = False):
    d2 = second_derivative_richardson if richardson else second_derivative_5pt
    return -0.5 * d2(psi, q, h) + model.num.to_float(model.V(sign, q)) * psi(q)


def sector_preservation_numeric(model: PhysicalModel, sign, grid=None, h: float = 1e-3, richardson: bool = False) -> dict:
    """``H psi_i`` by finite differences vs ``sum_j c_ji psi_j`` with the exact
    restricted-matrix coordinates."""
    from .laguerre import restricted_matrix

    grid = (np.linspace(0.5, 4.0, 200) if model.example_id == 1 else np.linspace(-3.0, 3.0, 200)) if grid is None else np.asarray(grid, dtype=float)
    s = "+" if sign in ("+", 1) else "-"
    m = restricted_matrix(model.ctx, s)
    psis = sector_functions(model, s)
    vals = [p(grid) for p in psis]
    rows = []
    worst = 0.0
    for i, psi in enumerate(psis):
        lhs = _schrodinger(model, s, psi, grid, h, richardson)
        rhs = sum(float(m.entries[j][i]) * vals[j] for j in range(len(psis)))
        scale = max(np.max(np.abs(rhs)), np.max(np.abs(vals[i])))
        err = np.abs(lhs - rhs) / scale
        k = int(np.argmax(err))
        rows.append({"n": i + 1, "residual": float(err[k]), "worst_q": float(grid[k])})
        worst = max(worst, float(err[k]))
    return {"sign": s, "stencil": "richardson" if richardson else "5pt", "h": h, "rows": rows, "max_residual": worst, "ok": worst < 1e-6, "matrix": [[str(x) for x in r] for r in m.entries]}


def eigenfunction_residuals(model: PhysicalModel, grid=None, h: float = 1e-3) -> dict:
    """Solvable rational model: ``H- psi = lambda psi`` for the eigenpolynomials."""
    from .laguerre import eigen_polys

    grid = np.linspace(0.5, 4.0, 200) if grid is None else np.asarray(grid, dtype=float)
    out = []
    for ep in eigen_polys(model.ctx):
        psi = SectorFunction(ep.poly, "rational", -0.5, model.ctx.alpha, q_power=float(model.ctx.alpha) + 0.5)
        lhs = _schrodinger(model, "-", psi, grid, h)
        rhs = float(ep.eigenvalue) * psi(grid)
        out.append({"n": ep.index, "eigenvalue": str(ep.eigenvalue), "residual": float(np.max(np.abs(lhs - rhs)) / np.max(np.abs(rhs)))})
    return {"rows": out, "max_residual": max(r["residual"] for r in out)}


def rayleigh_check(model: PhysicalModel, q_max: float = 12.0, points: int = 40001, h: float = 1e-3) -> dict:
    """Rayleigh quotients of the eigenfunctions against the exact eigenvalues."""
    from scipy.integrate import simpson

    from .laguerre import eigen_polys

    q = np.linspace(1e-2, q_max, points)
    rows = []
    for ep in eigen_polys(model.ctx):
        psi = SectorFunction(ep.poly, "rational", -0.5, model.ctx.alpha, q_power=float(model.ctx.alpha) + 0.5)
        v = psi(q)
        hv = _schrodinger(model, "-", psi, q, h)
        rq = simpson(v * hv, x=q) / simpson(v * v, x=q)
        rows.append({"n": ep.index, "eigenvalue": float(ep.eigenvalue), "rayleigh": float(rq), "error": abs(float(rq) - float(ep.eigenvalue))})
    return {"rows": rows, "max_error": max(r["error"] for r in rows)}


def susy_breaking_classification(model: PhysicalModel) -> str:
    """``unbroken`` if one of the two sectors lies in L^2, else ``broken``."""
    in_l2 = {}
    for sign in ("-", "+"):
        in_l2[sign] = all(sf.square_integrable(ep) for sf in sector_functions(model, sign) for ep in model.endpoints)
    return "unbroken" if (in_l2["-"] or in_l2["+"]) else "broken"


def sector_l2_report(model: PhysicalModel) -> dict:
    return {
        sign: {ep: all(sf.square_integrable(ep) for sf in sector_functions(model, sign)) for ep in model.endpoints}
        for sign in ("-", "+")
    }


def no_singularity_check(model: PhysicalModel, q=None) -> dict:
    """Hyperbolic model: ``f(zeta sinh q; b)`` has no real zero for ``b > 1``
    (discriminant ``-4(b-1) < 0``) and the potentials are finite on a grid."""
    q = np.linspace(-8, 8, 4001) if q is None else np.asarray(q, dtype=float)
    a, N = model.ctx.alpha, model.ctx.enn
    disc_ok = all(b > 1 for b in (a, a + N))
    finite = bool(np.all(np.isfinite(model.num.to_float(model.V("-", q)))) and np.all(np.isfinite(model.num.to_float(model.V("+", q)))))
    return {"discriminant_negative": disc_ok, "finite_on_grid": finite, "ok": disc_ok and finite}


def scaling_relation_check(model: PhysicalModel, nu, q=None) -> dict:
    """``V(q; nu a, nu c0) = nu V(sqrt(nu) q; a, c0)`` and the matching
    relation for ``z(q)``; the left side comes from the exact algebra."""
    nu = rat(nu)
    if nu <= 0:
        raise ParamError("nu must be positive")
    q = default_grid(model, 50) if q is None else np.asarray(q, dtype=float)
    scaled = model.ctx.scaled(nu)
    xp = model.num
    z_s, _ = change_of_variable(scaled, xp)
    with xp.context():
        qq = xp.asarray(q)
        r = xp.sqrt(xp.const(nu))
        errs = {"z": _rel(z_s(qq), model.z(r * qq))}
        for sign in ("-", "+"):
            lhs = algebra_potential(scaled, sign, xp)(qq)
            errs["V" + sign] = _rel(lhs, xp.const(nu) * model.V(sign, r * qq))
    return {"nu": str(nu), "precision": xp.prec, "errors": errs, "ok": max(errs.values()) < 1e-12}


def export_tables(model: PhysicalModel, grid, path: str, fmt: str = "csv", metadata: Optional[dict] = None) -> str:
    """Write ``q, V-, V+, psi_1..psi_N`` rows (minus sector) as CSV or JSON.

    CSV files get a sidecar ``<path>.meta.json`` with the run metadata.
    """
    grid = np.asarray(grid, dtype=float)
    psis = sector_functions(model, "-")
    cols = [grid, model.num.to_float(model.V("-", grid)), model.num.to_float(model.V("+", grid))] + [p(grid) for p in psis]
    header = ["q", "V_minus", "V_plus"] + ["psi_%d" % (i + 1) for i in range(len(psis))]
    meta = {"example": model.example_id, "params": model.ctx.as_dict()}
    meta.update(metadata or {})
    try:
        if fmt == "csv":
            with open(path, "w", newline="") as fh:
                w = csv.writer(fh)
                w.writerow(header)
                for row in zip(*cols):
                    w.writerow([repr(float(x)) for x in row])
            with open(path + ".meta.json", "w") as fh:
                json.dump(meta, fh, indent=2, sort_keys=True)
        elif fmt == "json":
            with open(path, "w") as fh:
                json.dump({"metadata": meta, "columns": header, "rows": [[float(x) for x in row] for row in zip(*cols)]}, fh, indent=1)
        else:
            raise ValueError("format must be csv or json")
    except OSError as exc:
        raise OSError("cannot write table to %s: %s" % (path, exc)) from exc
    return path
