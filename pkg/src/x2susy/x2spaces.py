"""The two X2 polynomial families and their ladder structure.

``phi_tilde(n, a)`` spans the first space (degree ``n+1``, every member
factorizes under ``d/dz - 1``), ``chi_bar(n, a)`` the partner space.  Both are
built from the quadratic ``f(z; a) = z^2 + 2(a-1) z + (a-1) a``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Sequence

from .exactalg import DomainError, LinDiffOp, Poly, RatFunc, rat, rref, solve_in_span

__all__ = [
    "ParamContext",
    "ParamError",
    "f_poly",
    "phi_tilde",
    "chi_bar",
    "lowering_minus",
    "raising_plus",
    "falling",
    "Basis",
    "membership",
    "phi_basis",
    "chi_basis",
    "o_plus_ops",
    "o_plus_factorizations",
    "fact1_cofactor",
    "degenerate_checks",
    "require_nondegenerate",
]


class ParamError(DomainError):
    """Parameter set outside the supported domain."""


@dataclass(frozen=True)
class ParamContext:
    """Free parameters ``alpha``, ``enn`` (the fold number), ``a1..a4``, ``c0``.

    Rational fields accept ints, Fractions or ``"p/q"`` strings.
    """

    alpha: Fraction
    enn: int
    a1: Fraction = Fraction(0)
    a2: Fraction = Fraction(0)
    a3: Fraction = Fraction(0)
    a4: Fraction = Fraction(0)
    c0: Fraction = Fraction(0)

    def __post_init__(self):
        for name in ("alpha", "a1", "a2", "a3", "a4", "c0"):
            object.__setattr__(self, name, rat(getattr(self, name)))
        if int(self.enn) != self.enn:
            raise ParamError("enn must be an integer")
        object.__setattr__(self, "enn", int(self.enn))
        if self.enn < 3:
            raise ParamError("enn must satisfy enn > 2 (got %d); enn = 1, 2 reduce to type A" % self.enn)
        if self.alpha in (0, 1):
            raise ParamError("degenerate alpha = %s: the constraint alpha != 0, 1 is required" % self.alpha)

    @property
    def a(self):
        return (self.a1, self.a2, self.a3, self.a4)

    def is_solvable(self) -> bool:
        return self.a2 == 0 and self.a3 == 0 and self.a4 == 0

    def replace(self, **kw) -> "ParamContext":
        d = dict(alpha=self.alpha, enn=self.enn, a1=self.a1, a2=self.a2, a3=self.a3, a4=self.a4, c0=self.c0)
        d.update(kw)
        return ParamContext(**d)

    def scaled(self, nu) -> "ParamContext":
        """All ``a_i`` and ``c0`` multiplied by ``nu``."""
        nu = rat(nu)
        return self.replace(a1=nu * self.a1, a2=nu * self.a2, a3=nu * self.a3, a4=nu * self.a4, c0=nu * self.c0)

    def as_dict(self) -> dict:
        return {
            "alpha": str(self.alpha),
            "enn": self.enn,
            "a1": str(self.a1),
            "a2": str(self.a2),
            "a3": str(self.a3),
            "a4": str(self.a4),
            "c0": str(self.c0),
        }


def require_nondegenerate(*alphas) -> None:
    """Raise unless every ``f(z; a)`` named by ``alphas`` has ``a not in {0, 1}``."""
    for a in alphas:
        if rat(a) in (0, 1):
            raise ParamError("f(z; %s) is degenerate (parameter in {0, 1})" % a)


def f_poly(alpha) -> Poly:
    a = rat(alpha)
    return Poly([(a - 1) * a, 2 * (a - 1), 1])


def phi_tilde(n: int, alpha) -> Poly:
    if n < 1:
        raise ValueError("phi_tilde needs n >= 1")
    a = rat(alpha)
    return Poly.monomial(n + 1, a + n - 2) + Poly.monomial(n, 2 * (a + n - 1) * (a - 1)) + Poly.monomial(
        n - 1, (a + n) * (a - 1) * a
    )


def chi_bar(n: int, alpha) -> Poly:
    if n < 1:
        raise ValueError("chi_bar needs n >= 1")
    a = rat(alpha)
    return (
        Poly.monomial(n + 1, (a - n) * (a - n + 1))
        + Poly.monomial(n, 2 * (a - n - 1) * (a - n + 1) * (a - 1))
        + Poly.monomial(n - 1, (a - n - 1) * (a - n) * (a - 1) * a)
    )


def falling(n: int, m: int) -> int:
    """``Gamma(n)/Gamma(n-m)`` as ``(n-1)(n-2)...(n-m)``; zero once ``n <= m``."""
    if n <= m:
        return 0
    out = 1
    for j in range(1, m + 1):
        out *= n - j
    return out


def _log_deriv(alpha) -> RatFunc:
    f = f_poly(alpha)
    return RatFunc(f.deriv(), f)


def lowering_minus(alpha) -> LinDiffOp:
    """``f(a+1)/f(a) * (d/dz - f'(a+1)/f(a+1))``; lowers ``phi_tilde(n, a)``
    to ``(n-1) phi_tilde(n-1, a+1)``."""
    a = rat(alpha)
    require_nondegenerate(a, a + 1)
    ratio = RatFunc(f_poly(a + 1), f_poly(a))
    return ratio * LinDiffOp({1: 1, 0: -_log_deriv(a + 1)})


def raising_plus(alpha) -> LinDiffOp:
    """``f(a-1)/f(a-2) * (d/dz + f'(a)/f(a))``."""
    a = rat(alpha)
    require_nondegenerate(a, a - 1, a - 2)
    ratio = RatFunc(f_poly(a - 1), f_poly(a - 2))
    return ratio * LinDiffOp({1: 1, 0: _log_deriv(a)})


# ---------------------------------------------------------------------------
# Bases and membership
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Basis:
    """Linearly independent polynomials with a cached echelon form."""

    elements: tuple
    echelon: tuple = field(repr=False, compare=False, default=())
    width: int = field(repr=False, compare=False, default=0)

    def __init__(self, elements: Sequence[Poly]):
        elements = tuple(elements)
        width = max((p.degree + 1 for p in elements), default=0)
        rows = [[p.coeff(k) for k in range(width)] for p in elements]
        m, piv = rref(rows)
        if len(piv) != len(elements):
            raise ArithmeticError("basis elements are linearly dependent")
        object.__setattr__(self, "elements", elements)
        object.__setattr__(self, "echelon", tuple(tuple(r) for r in m))
        object.__setattr__(self, "width", width)

    def __len__(self):
        return len(self.elements)

    def combine(self, coords: Sequence) -> Poly:
        out = Poly()
        for c, p in zip(coords, self.elements):
            out = out + p * rat(c)
        return out


def phi_basis(enn: int, alpha) -> Basis:
    return Basis([phi_tilde(n, alpha) for n in range(1, enn + 1)])


def chi_basis(enn: int, alpha) -> Basis:
    return Basis([chi_bar(n, alpha) for n in range(1, enn + 1)])


def membership(p, basis: Basis) -> Optional[List[Fraction]]:
    """Coordinates of ``p`` in ``basis`` or ``None`` when ``p`` is outside
    the span.  Rational functions count only when they reduce to polynomials."""
    if isinstance(p, RatFunc):
        if not p.is_poly():
            return None
        p = p.num
    if p.degree + 1 > basis.width:
        return None
    vecs = [[e.coeff(k) for k in range(basis.width)] for e in basis.elements]
    return solve_in_span(vecs, [p.coeff(k) for k in range(basis.width)])


# ---------------------------------------------------------------------------
# Factorization identities
# ---------------------------------------------------------------------------

def fact1_cofactor(n: int, alpha) -> Poly:
    """The bracket of ``(d/dz - 1) phi_n = -[(a+n-2) z - (n-1)(a+n)] z^{n-2} f``
    multiplied out, i.e. the full right-hand side as a polynomial.

    For ``n = 1`` the factor ``z^{-1}`` is absorbed: the bracket is
    ``(a-1) z`` there, so the product stays polynomial.
    """
    a = rat(alpha)
    bracket = Poly([-(n - 1) * (a + n), a + n - 2])
    f = f_poly(a)
    if n >= 2:
        return -(bracket * Poly.monomial(n - 2) * f)
    return -(bracket.exact_div(Poly.z()) * f)


def o_plus_ops(alpha):
    """``(O1, O2)`` with ``O1 = z d/dz - a`` and ``O2 = (a-1) d/dz + z + 2a - 2``."""
    a = rat(alpha)
    o1 = LinDiffOp({1: Poly.z(), 0: -a})
    o2 = LinDiffOp({1: a - 1, 0: Poly([2 * a - 2, 1])})
    return o1, o2


def o_plus_factorizations(alpha, n: int):
    """Cofactors of ``f(z; a)`` in ``O1 chi_n`` and ``O2 chi_n``.

    Both closed forms are checked against direct application; a mismatch
    means a transcription error and raises :class:`ArithmeticError`.
    """
    a = rat(alpha)
    chi = chi_bar(n, a)
    f = f_poly(a)
    o1, o2 = o_plus_ops(a)
    c1 = Poly.monomial(n - 1, -(a - n - 1) * (a - n) * (a - n + 1))
    bracket = Poly([(n - 1) * (a - n - 1) * (a - n) * (a - 1), 2 * (a - n - 1) * (a - n + 1) * (a - 1), (a - n) * (a - n + 1)])
    if n >= 2:
        c2 = bracket * Poly.monomial(n - 2)
    else:
        c2 = bracket.exact_div(Poly.z())
    for op, cof, name in ((o1, c1, "O1"), (o2, c2, "O2")):
        direct = op(chi)
        if not direct.is_poly() or direct.num != cof * f:
            raise ArithmeticError("%s factorization mismatch at n=%d, alpha=%s" % (name, n, a))
    return c1, c2


def degenerate_checks(alpha, n_max: int) -> dict:
    """Exact checks of the two degenerate reductions.

    ``alpha = 1``: each ``phi_n`` collapses to ``(n-1) z^{n+1}``, so the span of
    ``phi_1..phi_N`` is ``z^3 <1, ..., z^{N-2}>``.
    ``alpha = 0``: the weighted sum identity for ``3 <= n <= n_max``.
    """
    a = rat(alpha)
    report = {"alpha": str(a), "n_max": n_max, "checks": []}
    if a == 1:
        for n in range(1, n_max + 1):
            ok = phi_tilde(n, 1) == Poly.monomial(n + 1, n - 1)
            report["checks"].append({"n": n, "identity": "phi_n(z;1) = (n-1) z^(n+1)", "ok": ok})
        for enn in range(3, n_max + 1):
            span = [phi_tilde(k, 1) for k in range(2, enn + 1)]
            target = Basis([Poly.monomial(3 + j) for j in range(enn - 1)])
            ok = all(membership(p, target) is not None for p in span) and len(Basis(span)) == enn - 1
            report["checks"].append({"enn": enn, "identity": "V_N[z;1] = z^3 <1..z^(N-2)>", "ok": ok})
    elif a == 0:
        for n in range(3, n_max + 1):
            lhs = Poly()
            for k in range(3, n + 1):
                lhs = lhs + phi_tilde(k, 0) * Fraction(2 ** (n - k), (k - 1) * (k - 2))
            lhs = lhs * (n - 1)
            rhs = Poly.monomial(n + 1) - Poly.monomial(3, (n - 1) * 2 ** (n - 2))
            report["checks"].append({"n": n, "identity": "alpha=0 weighted sum", "ok": lhs == rhs})
    else:
        raise ValueError("degenerate_checks is only defined for alpha in {0, 1}")
    report["ok"] = all(c["ok"] for c in report["checks"])
    return report
