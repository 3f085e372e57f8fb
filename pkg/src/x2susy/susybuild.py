"""Gauged N-fold supercharges and the gauged Hamiltonian pair.

Everything here lives in z-space.  The overall ``z'(q)^N`` factor of each
supercharge is carried as an integer exponent and never expanded.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import List, Tuple

from .exactalg import LinDiffOp, Poly, RatFunc, diffop_to_json, nullspace, ratfunc_to_json
from .x2spaces import ParamContext, chi_bar, f_poly, phi_tilde, require_nondegenerate

__all__ = [
    "GaugedCharge",
    "GaugedPair",
    "log_deriv",
    "w_tilde",
    "w_tilde_general",
    "build_P_minus",
    "build_P_plus",
    "build_gauged_pair",
    "verify_preservation_plus",
    "kernel_dimension",
]


def log_deriv(alpha) -> RatFunc:
    f = f_poly(alpha)
    return RatFunc(f.deriv(), f)


def _ratio(a, b) -> RatFunc:
    """``f(z; a) / f(z; b)``."""
    return RatFunc(f_poly(a), f_poly(b))


@dataclass(frozen=True)
class GaugedCharge:
    """An N-th order z-space operator times ``z'(q)^prefactor_exponent``.

    ``product_form`` lists ``(left multiplier, first-order operator)`` pairs in
    application order reversed, i.e. ``z_part = outer * m_0 L_0 m_1 L_1 ...``
    with ``outer`` multiplying on the left and ``inner`` on the right.
    """

    z_part: LinDiffOp
    prefactor_exponent: int
    product_form: Tuple[Tuple[RatFunc, LinDiffOp], ...]
    outer: RatFunc
    inner: RatFunc

    def expand_product(self) -> LinDiffOp:
        op = LinDiffOp.mult(self.outer)
        for m, L in self.product_form:
            op = op * (m * L)
        return op * LinDiffOp.mult(self.inner)

    def __call__(self, p):
        return self.z_part(p)

    def to_json(self) -> dict:
        return {
            "prefactor_exponent": self.prefactor_exponent,
            "outer": ratfunc_to_json(self.outer),
            "inner": ratfunc_to_json(self.inner),
            "factors": [{"multiplier": ratfunc_to_json(m), "operator": diffop_to_json(L)} for m, L in self.product_form],
            "expanded": diffop_to_json(self.z_part),
        }


@dataclass(frozen=True)
class GaugedPair:
    h_minus: LinDiffOp
    h_plus: LinDiffOp
    q_poly_part: RatFunc
    c_func: RatFunc
    w_coeff: RatFunc

    def to_json(self) -> dict:
        return {
            "h_minus": diffop_to_json(self.h_minus),
            "h_plus": diffop_to_json(self.h_plus),
            "Q": ratfunc_to_json(self.q_poly_part),
            "C": ratfunc_to_json(self.c_func),
            "w_tilde": ratfunc_to_json(self.w_coeff),
        }


def w_tilde(ctx: ParamContext) -> RatFunc:
    """Closed form ``-(N-1) f'(a)/f(a) - f'(a+N)/f(a+N)``."""
    a, N = ctx.alpha, ctx.enn
    return log_deriv(a) * (-(N - 1)) - log_deriv(a + N)


def w_tilde_general(alpha, enn: int) -> RatFunc:
    """Term-by-term sum ``sum_k [g_k + (N-1-k) f_k'/f_k]`` with
    ``f_k = f(a+k+1)/f(a+k)`` and ``g_k = -f'(a+k+1)/f(a+k+1)``.

    Valid for any ``enn >= 1`` (``enn = 1`` gives the single term ``g_0``).
    """
    a = Fraction(alpha)
    out = RatFunc(0)
    for k in range(enn):
        fk = _ratio(a + k + 1, a + k)
        gk = -log_deriv(a + k + 1)
        out = out + gk + fk.deriv() / fk * (enn - 1 - k)
    return out


def _lowering_factor(a) -> Tuple[RatFunc, LinDiffOp]:
    return _ratio(a + 1, a), LinDiffOp({1: 1, 0: -log_deriv(a + 1)})


def build_P_minus(ctx: ParamContext) -> GaugedCharge:
    """``f(a)/f(a+N) * A-(a+N-1) ... A-(a)``."""
    a, N = ctx.alpha, ctx.enn
    require_nondegenerate(*[a + k for k in range(N + 1)])
    factors = tuple(_lowering_factor(a + k) for k in reversed(range(N)))
    outer = _ratio(a, a + N)
    op = LinDiffOp.mult(outer)
    for m, L in factors:
        op = op * (m * L)
    if op.coeff(N) != RatFunc(1):
        raise ArithmeticError("P- leading coefficient did not telescope to 1")
    return GaugedCharge(op, N, factors, outer, RatFunc(1))


def _transpose_form(p_minus: LinDiffOp, N: int) -> LinDiffOp:
    """``d^N + sum_k (-1)^(N-k) d^k o w_k`` from the coefficients ``w_k``."""
    out = LinDiffOp()
    for k in range(N + 1):
        wk = p_minus.coeff(k)
        if wk:
            out = out + LinDiffOp.d(k) * LinDiffOp.mult(wk) * ((-1) ** (N - k))
    return out


def build_P_plus(ctx: ParamContext) -> GaugedCharge:
    """``P+`` from the product of ``(d + f'(b)/f(b)) f(b)/f(b-1)`` factors,
    cross-checked against the transpose form and the ``A+`` product form."""
    a, N = ctx.alpha, ctx.enn
    require_nondegenerate(*[a + k for k in range(N + 1)])
    factors = []
    for k in reversed(range(N)):
        # the product is ordered k = N-1 (leftmost) ... 0 (rightmost)
        b = a + N - k
        factors.append((RatFunc(1), LinDiffOp({1: 1, 0: log_deriv(b)}) * LinDiffOp.mult(_ratio(b, b - 1))))
    factors = tuple(factors)
    inner = _ratio(a, a + N)
    op = LinDiffOp.identity()
    for _, L in factors:
        op = op * L
    op = op * LinDiffOp.mult(inner)

    pm = build_P_minus(ctx).z_part
    if _transpose_form(pm, N) != op:
        raise ArithmeticError("P+ product form disagrees with the transpose form")

    alt = LinDiffOp.mult(_ratio(a - 1, a))
    for k in reversed(range(N)):
        b = a + N - k
        alt = alt * (_ratio(b - 1, b - 2) * LinDiffOp({1: 1, 0: log_deriv(b)}))
    alt = alt * LinDiffOp.mult(_ratio(a, a + N - 1))
    if alt != op:
        raise ArithmeticError("P+ disagrees with its A+ product form")
    return GaugedCharge(op, N, factors, RatFunc(1), inner)


def build_gauged_pair(ctx: ParamContext) -> GaugedPair:
    """``H-bar^{+-}`` from ``A, Q, C, w~``; the minus sign must equal ``H~-``."""
    from .quasiops import build_H_minus

    a, N = ctx.alpha, ctx.enn
    h_tilde, parts = build_H_minus(ctx)
    A = RatFunc.from_poly(parts.A)
    Ap = A.deriv()
    frac = RatFunc(parts.D * (4 * (a - 1)), f_poly(a))
    Q = Ap * Fraction(N - 2, 2) + parts.Btilde + frac
    C = RatFunc.from_poly(parts.Ctilde) - frac
    w = w_tilde(ctx)
    half = Ap * Fraction(N - 2, 2)

    h_minus = LinDiffOp({2: -A, 1: half - Q, 0: -C})
    extra = Q.deriv() * Fraction(N - 1, 2) - Ap * w * Fraction(1, 2) - A * w.deriv()
    h_plus = LinDiffOp({2: -A, 1: half + Q, 0: -C - extra * 2})
    if h_minus != h_tilde:
        raise ArithmeticError("gauged H- disagrees with H~-")
    return GaugedPair(h_minus, h_plus, Q, C, w)


def verify_preservation_plus(ctx: ParamContext) -> dict:
    """Apply check-H+ to each ``chi_n(z; a+N)`` and record its coordinates."""
    from .quasiops import build_check_H_plus
    from .x2spaces import Basis, membership

    a, N = ctx.alpha, ctx.enn
    h, parts = build_check_H_plus(ctx)
    basis = Basis([chi_bar(n, a + N) for n in range(1, N + 1)])
    rows = []
    ok = True
    triangular = True
    for n in range(1, N + 1):
        coords = membership(h(chi_bar(n, a + N)), basis)
        if coords is None:
            ok = False
            rows.append({"n": n, "in_span": False})
            continue
        raises = any(c for c in coords[n:])
        triangular = triangular and not raises
        rows.append({"n": n, "in_span": True, "coords": [str(c) for c in coords]})
    return {"ok": ok, "triangular": triangular, "c0plus": str(parts.c0plus), "rows": rows}


def kernel_dimension(op: LinDiffOp, max_degree: int) -> int:
    """Dimension of the kernel of ``op`` restricted to polynomials of degree
    at most ``max_degree`` (exact rank computation)."""
    cols = []
    for k in range(max_degree + 1):
        img = op(Poly.monomial(k))
        cols.append(img)
    den = Poly([1])
    for c in cols:
        den = den * c.den if not c.den.divides(den) else den
    polys = [(c * den).as_poly() for c in cols]
    width = max((p.degree + 1 for p in polys), default=1)
    matrix = [[p.coeff(r) for p in polys] for r in range(max(width, 1))]
    return len(nullspace(matrix))
