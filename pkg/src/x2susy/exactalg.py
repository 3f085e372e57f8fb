"""Exact rational arithmetic: dense univariate polynomials, reduced rational
functions and linear differential operators in one variable ``z``.

Everything here is immutable.  Coefficients are :class:`fractions.Fraction`;
rational functions are kept in a canonical form (coprime numerator and
denominator, monic denominator) so that equality is a field-wise comparison.
"""

from __future__ import annotations

import json
from fractions import Fraction
from functools import reduce
from math import comb, gcd, lcm
from typing import Iterable, Mapping, Sequence, Union

__all__ = [
    "Rational",
    "rat",
    "Poly",
    "RatFunc",
    "LinDiffOp",
    "DomainError",
    "ratfunc_reduce",
    "diffop_apply",
    "diffop_compose",
    "diffop_transpose_z",
    "rref",
    "rank",
    "solve_in_span",
    "nullspace",
    "rational_to_str",
    "rational_from_str",
    "poly_to_json",
    "poly_from_json",
    "ratfunc_to_json",
    "ratfunc_from_json",
    "diffop_to_json",
    "diffop_from_json",
]

Rational = Fraction
Number = Union[int, Fraction]


class DomainError(ValueError):
    """An exact construction was asked for outside its domain."""


def rat(x) -> Fraction:
    """Coerce ``x`` to a Fraction.  Strings like ``"5/2"`` are accepted;
    floats are rejected so that decimals never leak into exact code."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("bool is not a rational")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return rational_from_str(x)
    if isinstance(x, float):
        raise TypeError("refusing to convert float %r to an exact rational" % x)
    # gmpy2.mpq and friends expose numerator/denominator
    return Fraction(int(x.numerator), int(x.denominator))


def rational_to_str(x: Fraction) -> str:
    return str(Fraction(x))


def rational_from_str(s: str) -> Fraction:
    s = s.strip()
    if "/" in s:
        p, q = s.split("/")
        return Fraction(int(p), int(q))
    return Fraction(int(s))


# ---------------------------------------------------------------------------
# Polynomials
# ---------------------------------------------------------------------------

def _strip(cs: list) -> tuple:
    n = len(cs)
    while n and not cs[n - 1]:
        n -= 1
    return tuple(cs[:n])


class Poly:
    """Dense polynomial in ``z`` with Fraction coefficients.

    ``coeffs[k]`` is the coefficient of ``z**k``; trailing zeros are
    stripped so the zero polynomial has an empty tuple.
    """

    __slots__ = ("coeffs", "_hash")

    def __init__(self, coeffs: Iterable = ()):
        self.coeffs = _strip([rat(c) for c in coeffs])
        self._hash = None

    @classmethod
    def _raw(cls, coeffs: tuple) -> "Poly":
        p = object.__new__(cls)
        p.coeffs = coeffs
        p._hash = None
        return p

    @classmethod
    def z(cls) -> "Poly":
        return cls._raw((Fraction(0), Fraction(1)))

    @classmethod
    def const(cls, c) -> "Poly":
        c = rat(c)
        return cls._raw((c,) if c else ())

    @classmethod
    def monomial(cls, k: int, c=1) -> "Poly":
        c = rat(c)
        if not c:
            return cls._raw(())
        return cls._raw((Fraction(0),) * k + (c,))

    # -- basic properties
    @property
    def degree(self) -> int:
        """Degree, with ``-1`` for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_const(self) -> bool:
        return len(self.coeffs) <= 1

    @property
    def lc(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def coeff(self, k: int) -> Fraction:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else Fraction(0)

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self.coeffs == Poly.const(other).coeffs
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(("Poly", self.coeffs))
        return self._hash

    def __repr__(self):
        return "Poly(%s)" % self.pretty()

    def pretty(self, var: str = "z") -> str:
        if not self.coeffs:
            return "0"
        terms = []
        for k in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[k]
            if not c:
                continue
            sign = "-" if c < 0 else "+"
            a = abs(c)
            if k == 0:
                body = str(a)
            else:
                mon = var if k == 1 else "%s^%d" % (var, k)
                body = mon if a == 1 else "%s*%s" % (a, mon)
            terms.append((sign, body))
        s0, b0 = terms[0]
        out = ("-" if s0 == "-" else "") + b0
        for s, b in terms[1:]:
            out += " %s %s" % (s, b)
        return out

    # -- arithmetic
    def __neg__(self):
        return Poly._raw(tuple(-c for c in self.coeffs))

    def __add__(self, other):
        if not isinstance(other, Poly):
            if isinstance(other, (int, Fraction)):
                other = Poly.const(other)
            else:
                return NotImplemented
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return Poly._raw(_strip(out))

    __radd__ = __add__

    def __sub__(self, other):
        if not isinstance(other, Poly):
            if isinstance(other, (int, Fraction)):
                other = Poly.const(other)
            else:
                return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                return Poly._raw(())
            return Poly._raw(tuple(c * other for c in self.coeffs))
        if not isinstance(other, Poly):
            return NotImplemented
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return Poly._raw(())
        out = [Fraction(0)] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if not x:
                continue
            for j, y in enumerate(b):
                out[i + j] += x * y
        return Poly._raw(_strip(out))

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power of a polynomial")
        result = Poly.const(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def scale(self, c) -> "Poly":
        return self * rat(c)

    def divmod(self, other: "Poly"):
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        r = list(self.coeffs)
        db = other.degree
        if len(r) - 1 < db:
            return Poly._raw(()), self
        inv = 1 / other.lc
        bq = other.coeffs
        q = [Fraction(0)] * (len(r) - db)
        for k in range(len(r) - 1 - db, -1, -1):
            c = r[k + db] * inv
            q[k] = c
            if c:
                for j in range(db + 1):
                    r[k + j] -= c * bq[j]
        return Poly._raw(_strip(q)), Poly._raw(_strip(r[:db]))

    def __floordiv__(self, other):
        return self.divmod(other)[0]

    def __mod__(self, other):
        return self.divmod(other)[1]

    def exact_div(self, other: "Poly") -> "Poly":
        q, r = self.divmod(other)
        if r:
            raise ArithmeticError("%r does not divide %r" % (other, self))
        return q

    def divides(self, other: "Poly") -> bool:
        return not (other % self)

    def deriv(self, k: int = 1) -> "Poly":
        cs = self.coeffs
        for _ in range(k):
            cs = tuple(i * cs[i] for i in range(1, len(cs)))
        return Poly._raw(cs)

    def __call__(self, x):
        """Horner evaluation at Fractions (exact), mpmath numbers, floats or
        numpy arrays."""
        if isinstance(x, (int, Fraction)):
            conv = lambda c: c  # noqa: E731
        elif type(x).__module__.startswith("mpmath"):
            import mpmath

            conv = lambda c: mpmath.mpf(c.numerator) / c.denominator  # noqa: E731
        else:
            conv = float
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + conv(c)
        return acc

    def compose(self, other: "Poly") -> "Poly":
        acc = Poly._raw(())
        for c in reversed(self.coeffs):
            acc = acc * other + c
        return acc

    def subs_neg(self) -> "Poly":
        """p(-z)."""
        return Poly._raw(tuple(c if k % 2 == 0 else -c for k, c in enumerate(self.coeffs)))

    def monic(self) -> "Poly":
        if not self.coeffs:
            return self
        return self * (1 / self.lc)

    def content_primitive(self):
        """Return ``(c, p)`` with ``self == c * p`` and ``p`` an integer
        polynomial with coprime coefficients and positive leading term."""
        if not self.coeffs:
            return Fraction(0), self
        ints, scale = _to_int_primitive(self.coeffs)
        return scale, Poly._raw(tuple(Fraction(c) for c in ints))

    def low_order(self) -> int:
        """Power of ``z`` dividing ``self`` (``-1`` for zero)."""
        for k, c in enumerate(self.coeffs):
            if c:
                return k
        return -1


def _to_int_primitive(cs: Sequence[Fraction]):
    den = reduce(lcm, (c.denominator for c in cs), 1)
    ints = [int(c.numerator * (den // c.denominator)) for c in cs]
    g = reduce(gcd, ints, 0)
    if ints[-1] < 0:
        g = -g
    ints = [c // g for c in ints]
    return ints, Fraction(g, den)


def _int_prem(a: list, b: list) -> list:
    """Pseudo-remainder of integer polynomials (ascending lists)."""
    r = list(a)
    db = len(b) - 1
    lb = b[-1]
    while len(r) - 1 >= db and r:
        k = len(r) - 1 - db
        lr = r[-1]
        r = [x * lb for x in r]
        for j in range(db + 1):
            r[k + j] -= lr * b[j]
        while r and not r[-1]:
            r.pop()
    return r


def _int_pp(a: list) -> list:
    g = reduce(gcd, a, 0)
    if a[-1] < 0:
        g = -g
    return [x // g for x in a]


def poly_gcd(a: Poly, b: Poly) -> Poly:
    """Monic gcd over Q via the primitive polynomial remainder sequence."""
    if a.is_zero():
        return b.monic()
    if b.is_zero():
        return a.monic()
    if a.is_const() or b.is_const():
        return Poly.const(1)
    x, _ = _to_int_primitive(a.coeffs)
    y, _ = _to_int_primitive(b.coeffs)
    if len(x) < len(y):
        x, y = y, x
    while y:
        if len(y) == 1:
            return Poly.const(1)
        r = _int_prem(x, y)
        x, y = y, (_int_pp(r) if r else r)
    return Poly._raw(tuple(Fraction(c) for c in x)).monic()


# ---------------------------------------------------------------------------
# Rational functions
# ---------------------------------------------------------------------------

_ONE = None  # filled below


class RatFunc:
    """Reduced ratio ``num/den`` of polynomials with ``den`` monic."""

    __slots__ = ("num", "den", "_hash")

    def __init__(self, num, den=None):
        num = _as_poly(num)
        den = Poly.const(1) if den is None else _as_poly(den)
        r = ratfunc_reduce(num, den)
        self.num, self.den, self._hash = r.num, r.den, None

    @classmethod
    def _raw(cls, num: Poly, den: Poly) -> "RatFunc":
        r = object.__new__(cls)
        r.num, r.den, r._hash = num, den, None
        return r

    @classmethod
    def from_poly(cls, p) -> "RatFunc":
        return cls._raw(_as_poly(p), _POLY_ONE)

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_poly(self) -> bool:
        return self.den.degree == 0

    def as_poly(self) -> Poly:
        if not self.is_poly():
            raise ArithmeticError("%r is not a polynomial" % self)
        return self.num

    def __bool__(self):
        return not self.num.is_zero()

    def __eq__(self, other):
        if isinstance(other, RatFunc):
            return self.num == other.num and self.den == other.den
        if isinstance(other, (Poly, int, Fraction)):
            return self == RatFunc.from_poly(other)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(("RatFunc", self.num.coeffs, self.den.coeffs))
        return self._hash

    def __repr__(self):
        if self.is_poly():
            return "RatFunc(%s)" % self.num.pretty()
        return "RatFunc((%s)/(%s))" % (self.num.pretty(), self.den.pretty())

    def __neg__(self):
        return RatFunc._raw(-self.num, self.den)

    def __add__(self, other):
        other = _as_ratfunc(other)
        if other is None:
            return NotImplemented
        if self.num.is_zero():
            return other
        if other.num.is_zero():
            return self
        a, b, c, d = self.num, self.den, other.num, other.den
        if b == d:
            return ratfunc_reduce(a + c, b)
        if b.is_const():
            return RatFunc._raw(a * d + c, d)
        if d.is_const():
            return RatFunc._raw(a + c * b, b)
        g = poly_gcd(b, d)
        if g.is_const():
            num = a * d + c * b
            return RatFunc._raw(num, b * d) if not num.is_zero() else _ZERO_RF
        b1 = b.exact_div(g)
        d1 = d.exact_div(g)
        num = a * d1 + c * b1
        if num.is_zero():
            return _ZERO_RF
        # Henrici: only g can share factors with num
        g2 = poly_gcd(num, g)
        if not g2.is_const():
            num = num.exact_div(g2)
            g = g.exact_div(g2)
        den = b1 * d1 * g
        return RatFunc._raw(num * (1 / den.lc), den.monic())

    __radd__ = __add__

    def __sub__(self, other):
        other = _as_ratfunc(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                return _ZERO_RF
            return RatFunc._raw(self.num * other, self.den)
        other = _as_ratfunc(other)
        if other is None:
            return NotImplemented
        if self.num.is_zero() or other.num.is_zero():
            return _ZERO_RF
        a, b, c, d = self.num, self.den, other.num, other.den
        g1 = poly_gcd(a, d)
        g2 = poly_gcd(c, b)
        if not g1.is_const():
            a, d = a.exact_div(g1), d.exact_div(g1)
        if not g2.is_const():
            c, b = c.exact_div(g2), b.exact_div(g2)
        den = b * d
        return RatFunc._raw(a * c * (1 / den.lc), den.monic())

    __rmul__ = __mul__

    def inverse(self) -> "RatFunc":
        if self.num.is_zero():
            raise ZeroDivisionError("inverse of the zero rational function")
        lc = self.num.lc
        return RatFunc._raw(self.den * (1 / lc), self.num * (1 / lc))

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * (1 / Fraction(other))
        other = _as_ratfunc(other)
        if other is None:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return _as_ratfunc(other) * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        return RatFunc._raw(self.num ** n, self.den ** n)

    def deriv(self, k: int = 1) -> "RatFunc":
        r = self
        for _ in range(k):
            if r.den.is_const():
                r = RatFunc._raw(r.num.deriv(), r.den)
            else:
                r = ratfunc_reduce(r.num.deriv() * r.den - r.num * r.den.deriv(), r.den * r.den)
        return r

    def __call__(self, x):
        return self.num(x) / self.den(x)

    def subs_neg(self) -> "RatFunc":
        return ratfunc_reduce(self.num.subs_neg(), self.den.subs_neg())


def _as_poly(p) -> Poly:
    if isinstance(p, Poly):
        return p
    if isinstance(p, (int, Fraction, str)):
        return Poly.const(rat(p))
    if isinstance(p, (list, tuple)):
        return Poly(p)
    raise TypeError("cannot interpret %r as a polynomial" % (p,))


def _as_ratfunc(x):
    if isinstance(x, RatFunc):
        return x
    if isinstance(x, Poly):
        return RatFunc._raw(x, _POLY_ONE)
    if isinstance(x, (int, Fraction)):
        return RatFunc._raw(Poly.const(x), _POLY_ONE)
    return None


def ratfunc_reduce(num: Poly, den: Poly) -> RatFunc:
    """Canonical representative of ``num/den``: coprime, monic denominator."""
    num, den = _as_poly(num), _as_poly(den)
    if den.is_zero():
        raise DomainError("zero denominator")
    if num.is_zero():
        return _ZERO_RF
    g = poly_gcd(num, den)
    if not g.is_const():
        num, den = num.exact_div(g), den.exact_div(g)
    lc = den.lc
    if lc != 1:
        inv = 1 / lc
        num, den = num * inv, den * inv
    return RatFunc._raw(num, den)


_POLY_ONE = Poly.const(1)
_ZERO_RF = RatFunc._raw(Poly._raw(()), _POLY_ONE)
_ONE_RF = RatFunc._raw(_POLY_ONE, _POLY_ONE)


# ---------------------------------------------------------------------------
# Linear differential operators
# ---------------------------------------------------------------------------

class LinDiffOp:
    """``sum_k c_k(z) d^k/dz^k`` with RatFunc coefficients (coefficients on
    the left)."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Mapping[int, object] = None):
        out = {}
        for k, c in (coeffs or {}).items():
            if k < 0:
                raise ValueError("negative derivative order")
            c = _as_ratfunc(c)
            if c is None:
                raise TypeError("bad coefficient %r" % (c,))
            if not c.is_zero():
                out[int(k)] = c
        self.coeffs = out

    @classmethod
    def identity(cls) -> "LinDiffOp":
        return cls({0: 1})

    @classmethod
    def d(cls, k: int = 1) -> "LinDiffOp":
        return cls({k: 1})

    @classmethod
    def mult(cls, c) -> "LinDiffOp":
        return cls({0: c})

    @property
    def order(self) -> int:
        return max(self.coeffs) if self.coeffs else -1

    def coeff(self, k: int) -> RatFunc:
        return self.coeffs.get(k, _ZERO_RF)

    def is_zero(self) -> bool:
        return not self.coeffs

    def __eq__(self, other):
        if not isinstance(other, LinDiffOp):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(tuple(sorted(self.coeffs.items())))

    def __repr__(self):
        parts = []
        for k in sorted(self.coeffs, reverse=True):
            c = self.coeffs[k]
            dk = "" if k == 0 else ("*D" if k == 1 else "*D^%d" % k)
            parts.append("[%s]%s" % (_rf_str(c), dk))
        return "LinDiffOp(%s)" % (" + ".join(parts) or "0")

    def __add__(self, other):
        if not isinstance(other, LinDiffOp):
            other = LinDiffOp.mult(other)
        out = dict(self.coeffs)
        for k, c in other.coeffs.items():
            out[k] = out[k] + c if k in out else c
        return LinDiffOp(out)

    __radd__ = __add__

    def __neg__(self):
        return LinDiffOp({k: -c for k, c in self.coeffs.items()})

    def __sub__(self, other):
        if not isinstance(other, LinDiffOp):
            other = LinDiffOp.mult(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        """Composition for operators; left scaling for scalars/functions."""
        if isinstance(other, LinDiffOp):
            return diffop_compose(self, other)
        return LinDiffOp({k: c * other for k, c in self.coeffs.items()})

    def __rmul__(self, other):
        return LinDiffOp({k: _as_ratfunc(other) * c for k, c in self.coeffs.items()})

    def __call__(self, p):
        return diffop_apply(self, p)

    def conjugate(self, g) -> "LinDiffOp":
        """``g * L * g^{-1}`` for a nonzero function ``g``."""
        g = _as_ratfunc(g)
        return diffop_compose(diffop_compose(LinDiffOp.mult(g), self), LinDiffOp.mult(g.inverse()))


def _rf_str(c: RatFunc) -> str:
    if c.is_poly():
        return c.num.pretty()
    return "(%s)/(%s)" % (c.num.pretty(), c.den.pretty())


def diffop_apply(L: LinDiffOp, p) -> RatFunc:
    p = _as_ratfunc(p)
    if not L.coeffs:
        return _ZERO_RF
    acc = _ZERO_RF
    dp = p
    for k in range(L.order + 1):
        if k:
            dp = dp.deriv()
        c = L.coeffs.get(k)
        if c is not None and not dp.is_zero():
            acc = acc + c * dp
    return acc


def diffop_compose(L1: LinDiffOp, L2: LinDiffOp) -> LinDiffOp:
    """``L1 o L2`` in coefficient-left form (Leibniz rule)."""
    out: dict = {}
    for j, b in L2.coeffs.items():
        derivs = [b]
        for _ in range(L1.order):
            derivs.append(derivs[-1].deriv())
        for i, a in L1.coeffs.items():
            for l in range(i + 1):
                bl = derivs[l]
                if bl.is_zero():
                    continue
                term = a * bl * comb(i, l)
                k = i - l + j
                out[k] = out[k] + term if k in out else term
    return LinDiffOp(out)


def diffop_transpose_z(L: LinDiffOp) -> LinDiffOp:
    """Formal transpose ``sum_k (-1)^k d^k o c_k`` re-expanded with
    coefficients on the left."""
    out: dict = {}
    for k, c in L.coeffs.items():
        sign = -1 if k % 2 else 1
        dc = c
        # d^k o c = sum_l C(k,l) c^{(k-l)} d^l
        derivs = [c]
        for _ in range(k):
            dc = dc.deriv()
            derivs.append(dc)
        for l in range(k + 1):
            t = derivs[k - l]
            if t.is_zero():
                continue
            term = t * (sign * comb(k, l))
            out[l] = out[l] + term if l in out else term
    return LinDiffOp(out)


# ---------------------------------------------------------------------------
# Exact linear algebra (lists of lists of Fractions)
# ---------------------------------------------------------------------------

def rref(rows: Sequence[Sequence[Fraction]]):
    """Reduced row echelon form.  Returns ``(matrix, pivot_columns)``."""
    m = [list(map(rat, r)) for r in rows]
    pivots = []
    if not m:
        return m, pivots
    ncols = len(m[0])
    r = 0
    for col in range(ncols):
        piv = None
        for i in range(r, len(m)):
            if m[i][col]:
                piv = i
                break
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][col]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][col]:
                f = m[i][col]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(col)
        r += 1
        if r == len(m):
            break
    return m, pivots


def rank(rows) -> int:
    return len(rref(rows)[1])


def solve_in_span(vectors: Sequence[Sequence[Fraction]], target: Sequence[Fraction]):
    """Coordinates ``c`` with ``sum c_i vectors[i] == target`` or ``None``.

    ``vectors`` must be linearly independent.
    """
    n = len(vectors)
    width = len(target)
    # columns are the vectors; augmented with target
    aug = [[vectors[i][r] for i in range(n)] + [target[r]] for r in range(width)]
    m, piv = rref(aug)
    if n in piv:
        return None
    if len(piv) < n:
        raise ArithmeticError("basis vectors are linearly dependent")
    coords = [Fraction(0)] * n
    for row, col in zip(m, piv):
        coords[col] = row[n]
    return coords


def nullspace(rows: Sequence[Sequence[Fraction]]):
    """Basis of the right null space of a matrix given by rows."""
    if not rows:
        return []
    m, piv = rref(rows)
    ncols = len(rows[0])
    free = [c for c in range(ncols) if c not in piv]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for row, p in zip(m, piv):
            v[p] = -row[f]
        basis.append(v)
    return basis


# ---------------------------------------------------------------------------
# JSON
# ---------------------------------------------------------------------------

def poly_to_json(p: Poly) -> list:
    return [rational_to_str(c) for c in p.coeffs]


def poly_from_json(data) -> Poly:
    return Poly(rational_from_str(str(c)) for c in data)


def ratfunc_to_json(r: RatFunc) -> dict:
    return {"num": poly_to_json(r.num), "den": poly_to_json(r.den)}


def ratfunc_from_json(data) -> RatFunc:
    return ratfunc_reduce(poly_from_json(data["num"]), poly_from_json(data["den"]))


def diffop_to_json(L: LinDiffOp) -> dict:
    return {str(k): ratfunc_to_json(L.coeffs[k]) for k in sorted(L.coeffs)}


def diffop_from_json(data) -> LinDiffOp:
    if isinstance(data, str):
        data = json.loads(data)
    return LinDiffOp({int(k): ratfunc_from_json(v) for k, v in data.items()})
