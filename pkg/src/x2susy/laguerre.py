"""Restricted matrices, eigenpolynomials and their link to X2-Laguerre
combinations.

The second-kind combinations are eigenvectors of the solvable restricted
``H~-`` (i.e. of ``J1``) in the ``phi`` basis.  The first-kind combinations
live in ``u_n(z) = chi_n(-z; -a)``, on which ``K1`` (taken at ``-a`` with
``z -> -z``) acts triangularly.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Sequence

import mpmath

from .exactalg import LinDiffOp, Poly, RatFunc, rat
from .x2spaces import Basis, ParamContext, ParamError, chi_bar, f_poly, membership, phi_tilde

__all__ = [
    "RestrictedMatrix",
    "EigenPoly",
    "restricted_matrix",
    "triangular_eigenvectors",
    "eigen_polys",
    "second_kind_combinations",
    "first_kind_basis",
    "first_kind_combinations",
    "first_kind_operator",
    "first_kind_relations",
    "second_kind_relations",
    "weight_moments",
    "gram_schmidt_support",
]


@dataclass(frozen=True)
class RestrictedMatrix:
    """``entries[j][i]`` is the coefficient of ``basis_{j+1}`` in ``H basis_{i+1}``."""

    entries: tuple
    side: str
    basis: tuple

    @property
    def size(self) -> int:
        return len(self.entries)

    def is_upper_triangular(self) -> bool:
        return all(self.entries[j][i] == 0 for i in range(self.size) for j in range(i + 1, self.size))

    def diagonal(self) -> List[Fraction]:
        return [self.entries[i][i] for i in range(self.size)]


def _matrix_of(op: LinDiffOp, polys: Sequence[Poly], side: str) -> RestrictedMatrix:
    basis = Basis(polys)
    n = len(polys)
    cols = []
    for p in polys:
        coords = membership(op(p), basis)
        if coords is None:
            raise ArithmeticError("operator maps a basis element outside the span")
        cols.append(coords)
    entries = tuple(tuple(cols[i][j] for i in range(n)) for j in range(n))
    return RestrictedMatrix(entries, side, tuple(polys))


def restricted_matrix(ctx: ParamContext, side: str = "-") -> RestrictedMatrix:
    """``H~-`` on ``phi_1..phi_N(z; a)`` or check-``H+`` on ``chi_1..chi_N(z; a+N)``."""
    from .quasiops import build_check_H_plus, build_H_minus

    N = ctx.enn
    if side == "-":
        op, _ = build_H_minus(ctx)
        polys = [phi_tilde(n, ctx.alpha) for n in range(1, N + 1)]
    elif side == "+":
        op, _ = build_check_H_plus(ctx)
        polys = [chi_bar(n, ctx.alpha + N) for n in range(1, N + 1)]
    else:
        raise ValueError("side must be '-' or '+'")
    return _matrix_of(op, polys, side)


def triangular_eigenvectors(m: Sequence[Sequence[Fraction]]) -> List[tuple]:
    """Eigenpairs of an upper-triangular matrix by back-substitution.

    The ``n``-th vector has ``v[n] = 1`` and zeros above ``n``.
    """
    size = len(m)
    for i in range(size):
        for j in range(i + 1, size):
            if m[j][i] != 0:
                raise ValueError("matrix is not upper triangular")
    diag = [m[i][i] for i in range(size)]
    if len(set(diag)) != size:
        raise ArithmeticError("repeated eigenvalue; eigenvectors are not determined by back-substitution")
    out = []
    for n in range(size):
        lam = diag[n]
        v = [Fraction(0)] * size
        v[n] = Fraction(1)
        for k in range(n - 1, -1, -1):
            s = sum(m[k][j] * v[j] for j in range(k + 1, n + 1))
            v[k] = -s / (m[k][k] - lam)
        out.append((lam, v))
    return out


@dataclass(frozen=True)
class EigenPoly:
    index: int
    eigenvalue: Fraction
    coords: tuple
    poly: Poly


def eigen_polys(ctx: ParamContext) -> List[EigenPoly]:
    """Eigenpolynomials of the solvable ``H~-`` restricted to ``phi_1..phi_N``,
    scaled so the ``phi_n`` coefficient is ``(-1)^(n+1)``."""
    if not ctx.is_solvable():
        raise ParamError("eigen_polys needs a2 = a3 = a4 = 0")
    if ctx.a1 == 0:
        raise ParamError("eigen_polys needs a1 != 0 for distinct eigenvalues")
    m = restricted_matrix(ctx, "-")
    out = []
    for n, (lam, v) in enumerate(triangular_eigenvectors(m.entries), start=1):
        sign = 1 if n % 2 == 1 else -1
        v = tuple(x * sign for x in v)
        p = Poly()
        for c, b in zip(v, m.basis):
            p = p + b * c
        out.append(EigenPoly(n, lam, v, p))
    return out


def second_kind_combinations(alpha) -> Dict[int, tuple]:
    """The three displayed second-kind combinations, as ``phi`` coordinates."""
    a = rat(alpha)
    return {
        1: (Fraction(1),),
        2: (a + 2, Fraction(-1)),
        3: ((a + 2) * (a + 3), -2 * (a + 3), Fraction(1)),
    }


def first_kind_basis(n: int, alpha) -> Poly:
    """``u_n(z) = chi_n(-z; -a)``."""
    return chi_bar(n, -rat(alpha)).subs_neg()


def first_kind_combinations(alpha) -> Dict[int, tuple]:
    a = rat(alpha)
    return {
        1: (Fraction(1),),
        2: (a + 3, Fraction(1)),
        3: ((a + 3) * (a + 4), 2 * (a + 4), Fraction(1)),
    }


def first_kind_operator(alpha) -> LinDiffOp:
    """``K1`` at parameter ``-a`` with ``z -> -z``: coefficients ``c_k(-z) (-1)^k``."""
    from .quasiops import k_operator

    k1 = k_operator(1, -rat(alpha), 3)
    return LinDiffOp({k: c.subs_neg() * ((-1) ** k) for k, c in k1.coeffs.items()})


def _eigen_check(op: LinDiffOp, polys: Sequence[Poly], coords: Sequence[Fraction], expected: Fraction):
    v = Poly()
    for c, p in zip(coords, polys):
        v = v + p * c
    image = op(v)
    ok = image.is_poly() and image.as_poly() == v * expected
    return ok, v


def second_kind_relations(alpha) -> dict:
    """Each displayed second-kind combination is an eigenvector of ``J1``
    with eigenvalue ``-(n+1)``, and equals the normalized eigenpolynomial of
    the solvable restricted ``H~-``."""
    from .quasiops import j_operator

    a = rat(alpha)
    j1 = j_operator(1, a, 3)
    combos = second_kind_combinations(a)
    eig = eigen_polys(ParamContext(a, 3, a1=1))
    rows = []
    for n, coords in combos.items():
        polys = [phi_tilde(k, a) for k in range(1, n + 1)]
        ok, v = _eigen_check(j1, polys, coords, Fraction(-(n + 1)))
        matches = eig[n - 1].poly == v
        rows.append({"n": n, "eigen": ok, "matches_eigenpoly": matches, "coords": [str(c) for c in coords]})
    return {"alpha": str(a), "kind": 2, "rows": rows, "ok": all(r["eigen"] and r["matches_eigenpoly"] for r in rows)}


def first_kind_relations(alpha) -> dict:
    """Each displayed first-kind combination of ``u_n`` is an eigenvector of
    the reflected ``K1`` with eigenvalue ``n+1``."""
    a = rat(alpha)
    if -a in (0, 1):
        raise ParamError("first-kind relations need -alpha not in {0, 1}")
    op = first_kind_operator(a)
    rows = []
    for n, coords in first_kind_combinations(a).items():
        polys = [first_kind_basis(k, a) for k in range(1, n + 1)]
        ok, _ = _eigen_check(op, polys, coords, Fraction(n + 1))
        rows.append({"n": n, "eigen": ok, "coords": [str(c) for c in coords]})
    return {"alpha": str(a), "kind": 1, "rows": rows, "ok": all(r["eigen"] for r in rows)}


# ---------------------------------------------------------------------------
# Gram-Schmidt under the weight z^a e^{-z} / f(z; a)^2 on (0, inf)
# ---------------------------------------------------------------------------

def _dps() -> int:
    return int(os.environ.get("X2SUSY_DPS", "40"))


def weight_moments(alpha, kmax: int, dps: int = None, q_max: int = 14) -> List[mpmath.mpf]:
    """``m_k = int_0^inf z^(a+k) e^{-z} / f(z;a)^2 dz`` for ``k <= kmax``.

    Substituting ``z = q^2`` gives ``2 q^(2a+2k+1) e^{-q^2} / f(q^2)^2``,
    which is smooth at ``q = 0`` for the half-integer and integer ``a`` used
    here.  Composite Gauss-Legendre on ``[0, q_max]`` with unit panels; the
    tail beyond ``q_max`` is below ``e^{-q_max^2}`` times a polynomial factor.
    """
    a = rat(alpha)
    if a <= 1:
        raise ParamError("the weight needs alpha > 1")
    dps = dps or _dps()
    f = f_poly(a)
    with mpmath.workdps(dps):
        am = mpmath.mpf(a.numerator) / a.denominator
        fc = [mpmath.mpf(c.numerator) / c.denominator for c in f.coeffs]
        panels = list(range(0, q_max + 1))
        out = []
        for k in range(kmax + 1):
            def integrand(q, k=k):
                z = q * q
                fz = fc[0] + fc[1] * z + fc[2] * z * z
                return 2 * q ** (2 * am + 2 * k + 1) * mpmath.exp(-z) / (fz * fz)

            out.append(mpmath.quad(integrand, panels, method="gauss-legendre"))
        return out


def gram_schmidt_support(ctx: ParamContext, n_max: int, dps: int = None) -> dict:
    """Orthogonalize ``phi_1..phi_nmax`` numerically and compare each result
    with the exact normalized eigenpolynomial.

    Deviation is the max absolute difference of ``phi`` coordinates after
    both are scaled to a unit top coefficient.
    """
    a = ctx.alpha
    if not ctx.is_solvable() or ctx.a1 == 0:
        raise ParamError("Gram-Schmidt comparison needs the solvable pattern a1 != 0, a2 = a3 = a4 = 0")
    dps = dps or _dps()
    big = ParamContext(a, max(n_max, 3), a1=ctx.a1, c0=ctx.c0)
    exact = eigen_polys(big)[:n_max]
    polys = [phi_tilde(n, a) for n in range(1, n_max + 1)]
    kmax = 2 * (n_max + 1)
    moments = weight_moments(a, kmax, dps)
    rows = []
    with mpmath.workdps(dps):
        def mp(c):
            return mpmath.mpf(c.numerator) / c.denominator

        def inner(p, r):
            prod = p * r
            return mpmath.fsum(mp(c) * moments[k] for k, c in enumerate(prod.coeffs))

        gram = mpmath.matrix(n_max, n_max)
        for i in range(n_max):
            for j in range(i, n_max):
                gram[i, j] = gram[j, i] = inner(polys[i], polys[j])
        worst = mpmath.mpf(0)
        for n in range(1, n_max + 1):
            if n == 1:
                coeffs = [mpmath.mpf(1)]
            else:
                g = gram[: n - 1, : n - 1]
                rhs = mpmath.matrix([-gram[j, n - 1] for j in range(n - 1)])
                c = mpmath.lu_solve(g, rhs)
                coeffs = [c[j] for j in range(n - 1)] + [mpmath.mpf(1)]
            top = exact[n - 1].coords[n - 1]
            ref = [mp(x / top) for x in exact[n - 1].coords[:n]]
            dev = max(abs(x - y) for x, y in zip(coeffs, ref))
            worst = max(worst, dev)
            rows.append({"n": n, "deviation": float(dev)})
    return {
        "alpha": str(a),
        "n_max": n_max,
        "weight": "z^alpha e^{-z} / f(z; alpha)^2 on (0, inf)",
        "label": "support for the Gram-Schmidt conjecture under the natural weight (numerical, not a proof)",
        "rows": rows,
        "max_deviation": float(worst),
    }
