from fractions import Fraction

import pytest
import sympy as sp
from hypothesis import given
from hypothesis import strategies as st

from conftest import polys, rationals
from x2susy.exactalg import (
    DomainError,
    LinDiffOp,
    Poly,
    RatFunc,
    diffop_apply,
    diffop_compose,
    diffop_from_json,
    diffop_to_json,
    diffop_transpose_z,
    nullspace,
    poly_from_json,
    poly_to_json,
    rank,
    rat,
    rational_from_str,
    rational_to_str,
    ratfunc_from_json,
    ratfunc_reduce,
    ratfunc_to_json,
    rref,
    solve_in_span,
)
from x2susy.x2spaces import f_poly, phi_tilde

Z = sp.Symbol("z")
z = Poly.z()


def to_sympy(p):
    if isinstance(p, RatFunc):
        return to_sympy(p.num) / to_sympy(p.den)
    return sum(sp.Rational(c.numerator, c.denominator) * Z**k for k, c in enumerate(p.coeffs))


def apply_sympy(L: LinDiffOp, expr):
    return sp.cancel(sum(to_sympy(c) * sp.diff(expr, Z, k) for k, c in L.coeffs.items()))


def small_ops(max_order=2):
    coeff = st.one_of(polys(3).map(RatFunc.from_poly), st.tuples(polys(2), polys(2)).filter(lambda t: not t[1].is_zero()).map(lambda t: RatFunc(t[0], t[1])))
    return st.dictionaries(st.integers(0, max_order), coeff, max_size=max_order + 1).map(LinDiffOp)


class TestRational:
    def test_parse_forms(self):
        assert rat("5/2") == Fraction(5, 2)
        assert rat(3) == Fraction(3)
        assert rational_from_str(rational_to_str(Fraction(-7, 3))) == Fraction(-7, 3)

    def test_float_rejected(self):
        with pytest.raises((TypeError, ValueError)):
            rat(0.1)


class TestRatFunc:
    def test_common_factor(self):
        assert ratfunc_reduce(z * z - 1, z - 1) == RatFunc.from_poly(z + 1)

    def test_identity_case(self):
        assert ratfunc_reduce(f_poly(2), f_poly(2)) == RatFunc(1)

    def test_monic_denominator(self):
        r = ratfunc_reduce(Poly([0, 0, 0, 2]), Poly([0, 4]))
        assert r.is_poly() and r.num == Poly([0, 0, Fraction(1, 2)])

    def test_zero_denominator(self):
        with pytest.raises(DomainError):
            ratfunc_reduce(z, Poly())

    @given(polys(4), polys(3), polys(3))
    def test_canonical_form_unique(self, p, q, r):
        if q.is_zero() or r.is_zero():
            return
        a = RatFunc(p * r, q * r)
        b = RatFunc(p, q)
        assert a == b
        assert (a.num, a.den) == (b.num, b.den)
        assert b.den.lc == 1

    @given(polys(4), polys(3))
    def test_matches_sympy(self, p, q):
        if q.is_zero():
            return
        assert sp.simplify(to_sympy(RatFunc(p, q)) - to_sympy(p) / to_sympy(q)) == 0


class TestDiffOp:
    def test_derivative(self):
        assert diffop_apply(LinDiffOp({1: 1}), Poly.monomial(3)) == RatFunc.from_poly(Poly.monomial(2, 3))

    def test_inverse_z_times_d(self):
        assert diffop_apply(LinDiffOp({1: RatFunc(1, z)}), Poly.monomial(2)) == RatFunc(2)

    def test_factorization_example(self):
        assert phi_tilde(1, 2) == Poly([6, 4, 1])
        assert diffop_apply(LinDiffOp({1: 1, 0: -1}), phi_tilde(1, 2)) == RatFunc.from_poly(-f_poly(2))

    def test_leibniz(self):
        assert diffop_compose(LinDiffOp.d(), LinDiffOp.mult(z)) == LinDiffOp({1: z, 0: 1})

    def test_compose_factors(self):
        assert diffop_compose(LinDiffOp({1: 1, 0: -1}), LinDiffOp({1: 1, 0: 1})) == LinDiffOp({2: 1, 0: -1})

    @given(small_ops())
    def test_compose_identity(self, L):
        assert diffop_compose(L, LinDiffOp.identity()) == L
        assert diffop_compose(LinDiffOp.identity(), L) == L

    def test_transpose_examples(self):
        assert diffop_transpose_z(LinDiffOp({1: z})) == LinDiffOp({1: -z, 0: -1})
        L = LinDiffOp({2: z * z, 1: z})
        assert diffop_transpose_z(diffop_transpose_z(L)) == L
        c = RatFunc(z + 1, f_poly(3))
        assert diffop_transpose_z(LinDiffOp({0: c})) == LinDiffOp({0: c})

    @given(small_ops(), polys(6), polys(6))
    def test_linearity(self, L, p, q):
        assert diffop_apply(L, p + q) == diffop_apply(L, p) + diffop_apply(L, q)

    @given(small_ops(), small_ops(), polys(8))
    def test_compose_is_application(self, L1, L2, p):
        assert diffop_apply(diffop_compose(L1, L2), p) == diffop_apply(L1, diffop_apply(L2, p))

    @given(small_ops(), polys(5))
    def test_apply_matches_sympy(self, L, p):
        got = to_sympy(diffop_apply(L, p))
        assert sp.simplify(got - apply_sympy(L, to_sympy(p))) == 0

    @given(small_ops(), small_ops())
    def test_transpose_anti_homomorphism(self, L1, L2):
        T = diffop_transpose_z
        assert T(T(L1)) == L1
        assert T(diffop_compose(L1, L2)) == diffop_compose(T(L2), T(L1))

    def test_conjugate(self):
        g = RatFunc.from_poly(f_poly(3))
        L = LinDiffOp({2: z, 1: 1})
        p = Poly([1, 2, 3])
        assert L.conjugate(g)(p) == g * L(RatFunc(p) / g)


class TestLinearAlgebra:
    def test_rank_and_nullspace(self):
        m = [[Fraction(1), Fraction(2), Fraction(3)], [Fraction(2), Fraction(4), Fraction(6)]]
        assert rank(m) == 1
        ns = nullspace(m)
        assert len(ns) == 2
        for v in ns:
            assert all(sum(r[j] * v[j] for j in range(3)) == 0 for r in m)

    def test_solve_in_span(self):
        vecs = [[Fraction(1), Fraction(0), Fraction(1)], [Fraction(0), Fraction(1), Fraction(1)]]
        assert solve_in_span(vecs, [Fraction(2), Fraction(3), Fraction(5)]) == [2, 3]
        assert solve_in_span(vecs, [Fraction(1), Fraction(0), Fraction(0)]) is None

    def test_rref_pivots(self):
        m, piv = rref([[Fraction(0), Fraction(2)], [Fraction(1), Fraction(1)]])
        assert piv == [0, 1]


class TestJson:
    @given(polys(8))
    def test_poly_round_trip(self, p):
        assert poly_from_json(poly_to_json(p)) == p

    @given(polys(4), polys(3))
    def test_ratfunc_round_trip(self, p, q):
        if q.is_zero():
            return
        r = RatFunc(p, q)
        assert ratfunc_from_json(ratfunc_to_json(r)) == r

    @given(small_ops(3))
    def test_diffop_round_trip(self, L):
        assert diffop_from_json(diffop_to_json(L)) == L

    def test_rational_strings(self):
        assert poly_to_json(Poly([Fraction(1, 3), -2])) == ["1/3", "-2"]
