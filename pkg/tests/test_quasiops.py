from fractions import Fraction

import pytest
import sympy as sp
from hypothesis import given
from hypothesis import strategies as st

from conftest import alphas
from x2susy.exactalg import LinDiffOp, Poly, RatFunc
from x2susy.quasiops import (
    action_expansion,
    action_formula,
    build_check_H_plus,
    build_H_minus,
    build_J,
    build_K,
    direct_coordinates,
    fractional_part,
    hamiltonian_parts,
    is_solvable,
    j_operator,
    k_operator,
    o_plus_decomposition,
)
from x2susy.x2spaces import Basis, ParamContext, ParamError, chi_bar, f_poly, membership, phi_tilde

z = Poly.z()


class TestBuild:
    def test_j1_at_two(self):
        # z d^2 - (z+1) d + 4(z+2)/f(z;2) (d - 1), expanded by hand
        f = f_poly(2)
        frac = RatFunc(Poly([8, 4]), f)
        expected = LinDiffOp({2: z, 1: RatFunc.from_poly(-(z + 1)) + frac, 0: -frac})
        assert j_operator(1, 2, 3) == expected

    def test_j1_eigen_n1(self):
        a = Fraction(5, 2)
        assert j_operator(1, a, 3)(phi_tilde(1, a)) == RatFunc.from_poly(phi_tilde(1, a) * -2)

    def test_j3_at_top(self):
        a, N = Fraction(5, 2), 4
        c = direct_coordinates("J", 3, N, a, N)
        assert c.get(1, 0) == 0

    def test_k1_examples(self):
        a = Fraction(7, 2)
        K1 = k_operator(1, a, 3)
        assert K1(chi_bar(1, a)) == RatFunc.from_poly(chi_bar(1, a) * 2)
        assert K1(chi_bar(2, a)) == RatFunc.from_poly(chi_bar(2, a) * 3 - chi_bar(1, a) * (a - 3))

    def test_k3_at_top(self):
        a, N = Fraction(7, 2), 4
        assert direct_coordinates("K", 3, N, a, N).get(1, 0) == 0

    def test_j4_guard(self):
        with pytest.raises(ParamError):
            build_J(4, ParamContext(Fraction(-1), 3))  # 2a + N - 1 = 0

    def test_k4_guard(self):
        with pytest.raises(ParamError):
            build_K(4, ParamContext(Fraction(2), 3))  # 2a - N - 1 = 0

    def test_index_range(self):
        with pytest.raises(ValueError):
            j_operator(5, 2, 3)


class TestActions:
    def test_j1_n5(self):
        a = Fraction(5, 3)
        e = action_formula("J", 1, 5, a, 6).as_dict()
        assert e[0] == -6 and e[-1] == 4 * (a + 5)

    def test_j2_top_shift_zero(self):
        a, N = Fraction(5, 3), 4
        assert action_expansion("J", 2, N, a, N).as_dict().get(1, 0) == 0

    def test_k4_n1_no_lowering(self):
        e = action_expansion("K", 4, 1, Fraction(11, 3), 4)
        assert e.as_dict().get(-1, 0) == 0

    def test_unavailable_form(self):
        # the K2 prefactor vanishes at a = -1, n = 1 while chi_1..chi_3 stay independent
        e = action_expansion("K", 2, 1, Fraction(-1), 4)
        assert not e.available and "direct application only" in e.note
        direct = {d: c for d, c in direct_coordinates("K", 2, 1, Fraction(-1), 4).items() if c}
        assert dict(e.terms) == direct

    def test_degenerate_basis(self):
        # phi_3(z; -1) loses its top term and the basis collapses
        with pytest.raises(ParamError, match="linearly dependent"):
            action_expansion("J", 2, 3, Fraction(-1), 4)

    @given(alphas(6), st.integers(3, 6), st.sampled_from("JK"), st.integers(1, 4))
    def test_formula_equals_direct(self, a, N, family, i):
        for n in range(1, N + 3):
            action_expansion(family, i, n, a, N)  # raises on mismatch

    @given(alphas(6), st.integers(3, 6))
    def test_preservation(self, a, N):
        for family, build, gen in (("J", j_operator, phi_tilde), ("K", k_operator, chi_bar)):
            basis = Basis([gen(n, a) for n in range(1, N + 1)])
            for i in range(1, 5):
                op = build(i, a, N)
                for n in range(1, N + 1):
                    assert membership(op(gen(n, a)), basis) is not None, (family, i, n)

    @given(alphas(6), st.integers(3, 6), st.sampled_from("JK"), st.integers(2, 4))
    def test_boundary_failure(self, a, N, family, i):
        c = direct_coordinates(family, i, N + 1, a, N)
        assert c is not None and c.get(1, 0) != 0

    @given(alphas(6))
    def test_exceptional(self, a):
        one = Poly([1])
        assert not j_operator(1, a, 3)(one).is_poly()
        assert not k_operator(1, a, 3)(one).is_poly()

    def test_solvable_flag_up_to_10(self):
        a = Fraction(7, 5)
        J1 = j_operator(1, a, 10)
        for n in range(1, 11):
            assert max(action_expansion("J", 1, n, a, 10).as_dict()) <= 0


class TestFractional:
    @given(alphas(5), st.integers(1, 4))
    def test_j_fractional_maps_to_polys(self, a, i):
        frac = fractional_part(j_operator(i, a, 5))
        for n in range(1, 6):
            assert frac(phi_tilde(n, a)).is_poly()

    @given(alphas(5), st.integers(1, 4))
    def test_k_fractional_decomposes(self, a, i):
        assert o_plus_decomposition(k_operator(i, a, 5), a) is not None

    def test_k1_decomposition(self):
        a = Fraction(5, 2)
        u, v = o_plus_decomposition(k_operator(1, a, 4), a)
        assert (u, v) == (Poly([4 * (a - 1)]), Poly([4 * a]))


class TestHamiltonians:
    def test_example_A(self):
        assert hamiltonian_parts(ParamContext(2, 3, a1=2)).A == Poly([0, 2])
        a, N = Fraction(5, 2), 4
        A = hamiltonian_parts(ParamContext(a, N, a2=Fraction(1, 2))).A
        assert A == Poly([(a - 1) * (a + N - 1), 0, 1]) * Fraction(1, 2)

    def test_solvable_flag(self):
        assert is_solvable(ParamContext(2, 3, a1=1))
        assert not is_solvable(ParamContext(2, 3, a1=1, a3=1))

    @given(alphas(5), st.integers(3, 5))
    def test_h_minus_two_routes(self, a, N):
        ctx = ParamContext(a, N, a1=Fraction(3, 2), a2=Fraction(-2, 3), a3=Fraction(5, 4), a4=Fraction(2, 7), c0=Fraction(1, 3))
        op, parts = build_H_minus(ctx)
        summed = LinDiffOp({0: -ctx.c0})
        for i, ai in enumerate(ctx.a, start=1):
            summed = summed - j_operator(i, a, N) * ai
        assert op == summed
        assert parts.D.is_zero() == fractional_part(op).is_zero()

    @given(alphas(5), st.integers(3, 5))
    def test_check_h_plus(self, a, N):
        ctx = ParamContext(a, N, a1=1, a2=Fraction(1, 3), a3=-1, a4=Fraction(1, 5))
        op, parts = build_check_H_plus(ctx)
        basis = Basis([chi_bar(n, a + N) for n in range(1, N + 1)])
        for n in range(1, N + 1):
            assert membership(op(chi_bar(n, a + N)), basis) is not None
        assert not op(Poly([1])).is_poly()

    def test_c0plus_rational_example(self):
        _, parts = build_check_H_plus(ParamContext(2, 3, a1=2))
        assert parts.c0plus == -12
