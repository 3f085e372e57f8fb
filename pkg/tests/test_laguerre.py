from fractions import Fraction

import mpmath
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import alphas
from x2susy.laguerre import (
    eigen_polys,
    first_kind_basis,
    first_kind_combinations,
    first_kind_relations,
    gram_schmidt_support,
    restricted_matrix,
    second_kind_combinations,
    second_kind_relations,
    triangular_eigenvectors,
    weight_moments,
)
from x2susy.quasiops import j_operator
from x2susy.x2spaces import ParamContext, ParamError, chi_bar, f_poly, phi_tilde


class TestRestrictedMatrix:
    def test_solvable_diagonal(self):
        m = restricted_matrix(ParamContext(2, 3, a1=2), "-")
        assert m.is_upper_triangular() and m.diagonal() == [4, 6, 8]

    @given(alphas(6), st.integers(3, 6), st.fractions(min_value=-5, max_value=5, max_denominator=5), st.fractions(min_value=-5, max_value=5, max_denominator=5))
    def test_diagonal_formula(self, a, N, a1, c0):
        if a1 == 0:
            return
        m = restricted_matrix(ParamContext(a, N, a1=a1, c0=c0), "-")
        assert m.diagonal() == [a1 * (n + 1) - c0 for n in range(1, N + 1)]

    def test_plus_side_triangular(self):
        m = restricted_matrix(ParamContext(2, 3, a1=2), "+")
        assert m.is_upper_triangular()

    def test_pentadiagonal_structure(self):
        m = restricted_matrix(ParamContext(Fraction(5, 2), 5, a2=1), "-")
        e = m.entries  # e[j][i]: component j of H basis_i
        for i in range(5):
            for j in range(5):
                if j - i > 1 or i - j > 2:
                    assert e[j][i] == 0
        assert any(e[i + 1][i] != 0 for i in range(4))

    def test_columns_are_membership(self):
        from x2susy.quasiops import build_H_minus
        from x2susy.x2spaces import Basis, membership

        ctx = ParamContext(Fraction(7, 3), 4, a1=1, a3=2)
        m = restricted_matrix(ctx, "-")
        H, _ = build_H_minus(ctx)
        b = Basis([phi_tilde(n, ctx.alpha) for n in range(1, 5)])
        for i in range(4):
            assert membership(H(phi_tilde(i + 1, ctx.alpha)), b) == [m.entries[j][i] for j in range(4)]


class TestEigen:
    def test_back_substitution(self):
        m = [[Fraction(1), Fraction(2)], [Fraction(0), Fraction(3)]]
        (l1, v1), (l2, v2) = triangular_eigenvectors(m)
        assert (l1, v1) == (1, [1, 0]) and l2 == 3 and v2 == [1, 1]

    def test_repeated_eigenvalue(self):
        with pytest.raises(ArithmeticError):
            triangular_eigenvectors([[Fraction(1), Fraction(1)], [Fraction(0), Fraction(1)]])

    def test_first_relation(self):
        a = Fraction(5, 2)
        ep = eigen_polys(ParamContext(a, 3, a1=1))
        assert ep[0].poly == phi_tilde(1, a)
        assert ep[1].poly == phi_tilde(1, a) * (a + 2) - phi_tilde(2, a)
        assert ep[2].poly == phi_tilde(3, a) - phi_tilde(2, a) * (2 * (a + 3)) + phi_tilde(1, a) * ((a + 2) * (a + 3))

    def test_second_combination_is_j1_eigenvector(self):
        a = Fraction(7, 4)
        v = phi_tilde(1, a) * (a + 2) - phi_tilde(2, a)
        assert j_operator(1, a, 3)(v) == v * -3

    def test_non_solvable_rejected(self):
        with pytest.raises(ParamError):
            eigen_polys(ParamContext(2, 3, a1=1, a2=1))

    @given(alphas(6), st.integers(3, 6))
    def test_normalization_and_eigen(self, a, N):
        ep = eigen_polys(ParamContext(a, N, a1=1))
        m = restricted_matrix(ParamContext(a, N, a1=1), "-")
        for e in ep:
            assert e.coords[e.index - 1] == (-1) ** (e.index + 1)
            for j in range(N):
                assert sum(m.entries[j][i] * e.coords[i] for i in range(N)) == e.eigenvalue * e.coords[j]


class TestRelations:
    @pytest.mark.parametrize("a", [2, Fraction(5, 2), 3, Fraction(-7, 3), Fraction(13, 5), Fraction(1, 3), 7, Fraction(-9, 2)])
    def test_both_kinds(self, a):
        assert second_kind_relations(a)["ok"]
        assert first_kind_relations(a)["ok"]

    def test_first_kind_basis(self):
        a = Fraction(5, 2)
        assert first_kind_basis(1, a) == chi_bar(1, -a).subs_neg()
        # u_1 = chi_1(-z; -a) = a(a+1) f(-z; -a-1)
        assert first_kind_basis(1, a) == f_poly(-a - 1).subs_neg() * (a * (a + 1))

    def test_combination_tables(self):
        a = Fraction(3)
        assert second_kind_combinations(a)[2] == (5, -1)
        assert first_kind_combinations(a)[3] == (42, 14, 1)


class TestGramSchmidt:
    def test_weight_positive(self):
        for a in (Fraction(3, 2), 2, 5):
            f = f_poly(a)
            assert all(f(Fraction(k, 4)) > 0 for k in range(0, 80))

    def test_moment_zero_against_quad(self):
        # independent oracle: mpmath tanh-sinh on the original z-integral
        a = Fraction(5, 2)
        m0 = weight_moments(a, 0, 30)[0]
        with mpmath.workdps(30):
            ref = mpmath.quad(lambda z: z**2.5 * mpmath.exp(-z) / (z * z + 3 * z + mpmath.mpf(15) / 4) ** 2, [0, 1, 10, mpmath.inf])
        assert abs(m0 - ref) < 1e-20

    def test_single_vector(self):
        r = gram_schmidt_support(ParamContext(2, 3, a1=1), 1)
        assert r["max_deviation"] == 0

    @pytest.mark.parametrize("a", [2, Fraction(5, 2), 3])
    def test_deviation(self, a):
        r = gram_schmidt_support(ParamContext(a, 3, a1=1), 6)
        assert r["max_deviation"] < 1e-8
        assert "not a proof" in r["label"]

    def test_wrong_weight_detected(self, monkeypatch):
        import x2susy.laguerre as L

        real = L.f_poly
        monkeypatch.setattr(L, "f_poly", lambda a: real(a + Fraction(1, 2)))
        r = L.gram_schmidt_support(ParamContext(2, 3, a1=1), 4)
        assert r["max_deviation"] > 1e-3

    def test_alpha_guard(self):
        with pytest.raises(ParamError):
            weight_moments(Fraction(1, 2), 2)
