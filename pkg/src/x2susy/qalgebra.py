"""Exact physical-space operator algebra.

Functions of ``q`` are represented through the change of variable ``z(q)``
with ``z'(q)^2 = 2 A(z)``.  Every function that shows up is of the form
``e(z) + o(z) z'(q)`` with rational ``e``, ``o``, so the algebra is the
quadratic extension ``R(z)[z'] / (z'^2 - 2A)``.  ``1/z'`` is stored as
``z'/(2A)``.  ``D = d/dq`` acts as ``D(e + o z') = (2A o' + A' o) + e' z'``.

Parity: an element is even when ``odd == 0`` and odd when ``even == 0``.
``D`` counts as odd, so ``sum c_k D^k`` has parity ``p`` when every ``c_k``
has parity ``p + k`` (mod 2).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Dict, Optional

from .exactalg import LinDiffOp, Poly, RatFunc, _as_ratfunc, ratfunc_to_json
from .x2spaces import ParamContext, f_poly

__all__ = [
    "QElement",
    "QOperator",
    "qelement_mul",
    "q_derivative",
    "qoperator_transpose",
    "PhysicalFunctions",
    "physical_functions",
    "build_physical_H",
    "build_physical_P",
    "gauge_H",
    "gauge_P",
    "verify_intertwining",
]


@dataclass(frozen=True)
class QElement:
    """``even(z) + odd(z) * z'`` in the algebra with ``z'^2 = 2A``."""

    even: RatFunc
    odd: RatFunc
    A: Poly

    def __post_init__(self):
        for name in ("even", "odd"):
            v = _as_ratfunc(getattr(self, name))
            if v is None:
                raise TypeError("cannot build a QElement part from %r" % (getattr(self, name),))
            object.__setattr__(self, name, v)

    @classmethod
    def scalar(cls, c, A: Poly) -> "QElement":
        return cls(c, 0, A)

    @classmethod
    def zprime(cls, A: Poly) -> "QElement":
        return cls(0, 1, A)

    def is_zero(self) -> bool:
        return self.even.is_zero() and self.odd.is_zero()

    @property
    def parity(self) -> Optional[int]:
        """0, 1, or ``None`` for mixed; zero counts as both (returns 0)."""
        if self.odd.is_zero():
            return 0
        if self.even.is_zero():
            return 1
        return None

    def has_parity(self, p: int) -> bool:
        return (self.odd if p % 2 == 0 else self.even).is_zero()

    def _coerce(self, other) -> "QElement":
        if isinstance(other, QElement):
            if other.A != self.A:
                raise ValueError("elements from different algebras")
            return other
        return QElement(other, 0, self.A)

    def __add__(self, other):
        o = self._coerce(other)
        return QElement(self.even + o.even, self.odd + o.odd, self.A)

    __radd__ = __add__

    def __neg__(self):
        return QElement(-self.even, -self.odd, self.A)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, QOperator):
            return NotImplemented
        return qelement_mul(self, self._coerce(other))

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, QElement):
            return NotImplemented
        return self.A == other.A and self.even == other.even and self.odd == other.odd

    def __hash__(self):
        return hash((self.even, self.odd))

    def norm(self) -> RatFunc:
        return self.even * self.even - self.odd * self.odd * self.A * 2

    def inverse(self) -> "QElement":
        n = self.norm()
        if n.is_zero():
            raise ZeroDivisionError("element is not invertible")
        return QElement(self.even / n, -self.odd / n, self.A)

    def __truediv__(self, other):
        return self * self._coerce(other).inverse()

    def deriv(self) -> "QElement":
        return q_derivative(self)

    def __repr__(self):
        return "QElement(%r + (%r) z')" % (self.even, self.odd)

    def to_json(self) -> dict:
        return {"even": ratfunc_to_json(self.even), "odd": ratfunc_to_json(self.odd)}


def qelement_mul(x: QElement, y: QElement) -> QElement:
    two_a = RatFunc.from_poly(x.A * 2)
    return QElement(x.even * y.even + two_a * x.odd * y.odd, x.even * y.odd + x.odd * y.even, x.A)


def q_derivative(x: QElement) -> QElement:
    A = RatFunc.from_poly(x.A)
    return QElement(A * x.odd.deriv() * 2 + A.deriv() * x.odd, x.even.deriv(), x.A)


class QOperator:
    """``sum_k c_k D^k`` with ``D = d/dq`` and ``c_k`` in the algebra."""

    __slots__ = ("coeffs", "A")

    def __init__(self, coeffs: Dict[int, QElement], A: Poly):
        self.A = A
        self.coeffs = {k: c for k, c in coeffs.items() if not c.is_zero()}

    @classmethod
    def mult(cls, c, A: Poly) -> "QOperator":
        c = c if isinstance(c, QElement) else QElement(c, 0, A)
        return cls({0: c}, A)

    @classmethod
    def D(cls, A: Poly, k: int = 1) -> "QOperator":
        return cls({k: QElement(1, 0, A)}, A)

    @property
    def order(self) -> int:
        return max(self.coeffs) if self.coeffs else -1

    def coeff(self, k: int) -> QElement:
        return self.coeffs.get(k, QElement(0, 0, self.A))

    def is_zero(self) -> bool:
        return not self.coeffs

    def parity(self) -> Optional[int]:
        for p in (0, 1):
            if all(c.has_parity(p + k) for k, c in self.coeffs.items()):
                return p
        return None

    def __eq__(self, other):
        if not isinstance(other, QOperator):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __add__(self, other):
        if not isinstance(other, QOperator):
            other = QOperator.mult(other, self.A)
        out = dict(self.coeffs)
        for k, c in other.coeffs.items():
            out[k] = out[k] + c if k in out else c
        return QOperator(out, self.A)

    __radd__ = __add__

    def __neg__(self):
        return QOperator({k: -c for k, c in self.coeffs.items()}, self.A)

    def __sub__(self, other):
        if not isinstance(other, QOperator):
            other = QOperator.mult(other, self.A)
        return self + (-other)

    def __mul__(self, other):
        """Composition for operators, left scaling for elements/scalars."""
        if isinstance(other, QOperator):
            return _compose(self, other)
        c = other if isinstance(other, QElement) else QElement(other, 0, self.A)
        return QOperator({k: c * v for k, v in self.coeffs.items()}, self.A)

    def __rmul__(self, other):
        c = other if isinstance(other, QElement) else QElement(other, 0, self.A)
        return QOperator({k: c * v for k, v in self.coeffs.items()}, self.A)

    def __repr__(self):
        return "QOperator(order=%d)" % self.order

    def to_json(self) -> dict:
        return {str(k): c.to_json() for k, c in sorted(self.coeffs.items())}


def _compose(a: QOperator, b: QOperator) -> QOperator:
    """Normal-ordered ``a o b`` via ``D^j c = sum_m C(j,m) D^m(c) D^(j-m)``."""
    jmax = a.order
    out: Dict[int, QElement] = {}
    for k, bk in b.coeffs.items():
        derivs = [bk]
        for _ in range(max(jmax, 0)):
            derivs.append(q_derivative(derivs[-1]))
        for j, aj in a.coeffs.items():
            for m in range(j + 1):
                dm = derivs[m]
                if dm.is_zero():
                    continue
                term = aj * dm
                if m < j:
                    term = term * comb(j, m)
                p = j - m + k
                out[p] = out[p] + term if p in out else term
    return QOperator(out, a.A)


def qoperator_transpose(P: QOperator) -> QOperator:
    """``sum_k (-1)^k D^k o c_k``, normal-ordered."""
    out = QOperator({}, P.A)
    for k, c in P.coeffs.items():
        out = out + QOperator.D(P.A, k) * QOperator.mult(c, P.A) * ((-1) ** k)
    return out


# ---------------------------------------------------------------------------
# Physical-space building blocks
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PhysicalFunctions:
    A: Poly
    E: QElement
    W: QElement
    C: RatFunc
    w: RatFunc
    Q: RatFunc

    def F(self, alpha) -> QElement:
        f = f_poly(alpha)
        return QElement(0, RatFunc(f.deriv(), f), self.A)


def physical_functions(ctx: ParamContext) -> PhysicalFunctions:
    from .quasiops import hamiltonian_parts
    from .susybuild import build_gauged_pair

    pair = build_gauged_pair(ctx)
    A = hamiltonian_parts(ctx).A
    if A.is_zero():
        raise ValueError("A(z) vanishes identically; no change of variable exists")
    ra = RatFunc.from_poly(A)
    E = QElement(0, ra.deriv() / (ra * 2), A)
    W = QElement(0, -pair.q_poly_part / (ra * 2), A)
    return PhysicalFunctions(A, E, W, pair.c_func, pair.w_coeff, pair.q_poly_part)


def _sign(sign) -> int:
    if sign in ("+", 1, "plus"):
        return 1
    if sign in ("-", -1, "minus"):
        return -1
    raise ValueError("sign must be '+' or '-'")


def build_physical_H(ctx: ParamContext, sign) -> QOperator:
    """``H^{+-}`` from the display in terms of ``W, E, C, w~``."""
    s = _sign(sign)
    N = ctx.enn
    pf = physical_functions(ctx)
    A, E, W = pf.A, pf.E, pf.W
    ra = RatFunc.from_poly(A)
    Wp, Ep = q_derivative(W), q_derivative(E)
    pot = (
        W * W * Fraction(1, 2)
        - (Ep - E * E * Fraction(N - 1, 2) - Wp * 2 - E * W * 2) * Fraction(N - 1, 4)
        - pf.C
        + Wp * Fraction(s * N, 2)
    )
    if s == 1:
        pot = pot + QElement(ra.deriv() * pf.w + ra * 2 * pf.w.deriv(), 0, A)
    if not pot.has_parity(0):
        raise ArithmeticError("H potential has an odd-parity residue")
    return QOperator({2: QElement(Fraction(-1, 2), 0, A), 0: pot}, A)


def build_physical_P(ctx: ParamContext, sign) -> QOperator:
    """``P^{+-}`` from the displayed first-order factor products."""
    s = _sign(sign)
    a, N = ctx.alpha, ctx.enn
    pf = physical_functions(ctx)
    A, E, W = pf.A, pf.E, pf.W
    Dq = QOperator.D(A)

    def ratio(x, y):
        return QElement(RatFunc(f_poly(x), f_poly(y)), 0, A)

    if s == -1:
        op = QOperator.mult(ratio(a, a + N), A)
        for k in reversed(range(N)):
            factor = Dq + (W - pf.F(a + k + 1) + E * Fraction(N - 1 - 2 * k, 2))
            _assert_parity(factor, 1)
            op = op * (ratio(a + k + 1, a + k) * factor)
    else:
        op = QOperator.mult(1, A)
        for k in reversed(range(N)):
            factor = Dq + (-W + pf.F(a + N - k) + E * Fraction(N - 1 - 2 * k, 2))
            _assert_parity(factor, 1)
            op = op * factor * QOperator.mult(ratio(a + N - k, a + N - k - 1), A)
        op = op * QOperator.mult(ratio(a, a + N), A)
    _assert_parity(op, N % 2)
    return op


def _assert_parity(op: QOperator, p: int) -> None:
    if op.parity() not in (p,) and not op.is_zero():
        raise ArithmeticError("operator parity is not %d" % p)


def _gauge(L: LinDiffOp, prefactor: int, dW: QElement, A: Poly) -> QOperator:
    """``exp(-W) z'^prefactor L exp(W)`` with ``d/dz -> (1/z')(D + W')``."""
    inv_zp = QElement(0, RatFunc(1, A * 2), A)
    dz = QOperator({0: inv_zp * dW, 1: inv_zp}, A)
    out = QOperator({}, A)
    power = QOperator.mult(1, A)
    for k in range(L.order + 1):
        c = L.coeff(k)
        if not c.is_zero():
            out = out + QOperator.mult(QElement(c, 0, A), A) * power
        power = power * dz
    zp = QElement(1, 0, A)
    for _ in range(prefactor):
        zp = zp * QElement.zprime(A)
    return QOperator.mult(zp, A) * out


def _gauge_potential_derivative(pf: PhysicalFunctions, N: int, s: int) -> QElement:
    return pf.E * Fraction(N - 1, 2) - pf.W * s


def gauge_H(ctx: ParamContext, sign) -> QOperator:
    """``H^{+-}`` by gauge-transforming the z-space pair."""
    from .susybuild import build_gauged_pair

    s = _sign(sign)
    pair = build_gauged_pair(ctx)
    pf = physical_functions(ctx)
    L = pair.h_plus if s == 1 else pair.h_minus
    return _gauge(L, 0, _gauge_potential_derivative(pf, ctx.enn, s), pf.A)


def gauge_P(ctx: ParamContext, sign) -> QOperator:
    """``P^{+-}`` by gauge-transforming the z-space supercharge (with its
    ``z'^N`` prefactor), using the same-sign gauge potential on both sides."""
    from .susybuild import build_P_minus, build_P_plus

    s = _sign(sign)
    charge = build_P_plus(ctx) if s == 1 else build_P_minus(ctx)
    pf = physical_functions(ctx)
    return _gauge(charge.z_part, charge.prefactor_exponent, _gauge_potential_derivative(pf, ctx.enn, s), pf.A)


def verify_intertwining(ctx: ParamContext, routes: bool = True) -> dict:
    """Exact residuals of ``P- H- - H+ P-`` and ``P+ H+ - H- P+`` plus the
    transpose relation and (optionally) the gauge-route comparisons."""
    Hm, Hp = build_physical_H(ctx, "-"), build_physical_H(ctx, "+")
    Pm, Pp = build_physical_P(ctx, "-"), build_physical_P(ctx, "+")
    report = {"ctx": ctx.as_dict(), "checks": {}}

    def residual(op):
        bad = sorted(op.coeffs)
        return {"zero": not bad, "nonzero_orders": bad}

    report["checks"]["P-H- = H+P-"] = residual(Pm * Hm - Hp * Pm)
    report["checks"]["P+H+ = H-P+"] = residual(Pp * Hp - Hm * Pp)
    sgn = (-1) ** ctx.enn
    report["checks"]["P+ = (-1)^N P-^T"] = residual(Pp - qoperator_transpose(Pm) * sgn)
    report["checks"]["H order-1 vanishes"] = {"zero": Hm.coeff(1).is_zero() and Hp.coeff(1).is_zero()}
    if routes:
        report["checks"]["H- gauge route"] = residual(Hm - gauge_H(ctx, "-"))
        report["checks"]["H+ gauge route"] = residual(Hp - gauge_H(ctx, "+"))
        report["checks"]["P- gauge route"] = residual(Pm - gauge_P(ctx, "-"))
        report["checks"]["P+ gauge route"] = residual(Pp - gauge_P(ctx, "+"))
    report["ok"] = all(c["zero"] for c in report["checks"].values())
    return report
