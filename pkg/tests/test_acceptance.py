"""Acceptance suite.

Each test carries a ``criterion`` marker; the terminal summary prints one
PASS/FAIL line per criterion.  The exact stages compare two independent
routes (closed forms vs direct application, product vs transpose form, four
constructions of the conjugated Hamiltonian); the numeric stages compare
closed-form potentials with the exact algebra and with hand-derived
rational values.
"""

import random
import time
from fractions import Fraction

import numpy as np
import pytest

from x2susy import models as M
from x2susy.exactalg import LinDiffOp, Poly, RatFunc
from x2susy.laguerre import (
    eigen_polys,
    first_kind_relations,
    gram_schmidt_support,
    restricted_matrix,
    second_kind_combinations,
    second_kind_relations,
)
from x2susy.qalgebra import verify_intertwining
from x2susy.quasiops import action_expansion, j_operator, k_operator
from x2susy.susybuild import build_P_minus, build_P_plus, kernel_dimension
from x2susy.verify import (
    check_exceptionality,
    check_gauged_consistency,
    check_invariance,
    generic_ctx,
    sample_alphas,
)
from x2susy.x2spaces import (
    Basis,
    ParamContext,
    chi_bar,
    degenerate_checks,
    f_poly,
    membership,
    phi_tilde,
)

SEED = 20240611
ENNS = range(3, 9)


def _grid_alphas(count=25, enns=ENNS, seed=SEED):
    rng = random.Random(seed)
    return {N: sample_alphas(rng, count, N) for N in enns}


def _failed(records):
    return [(r.check_id, r.params, r.witness) for r in records if not r.status]


# ---------------------------------------------------------------------------
# exact stages
# ---------------------------------------------------------------------------

@pytest.mark.criterion(1, "invariance")
def test_invariance_and_action_formulas():
    t0 = time.perf_counter()
    grid = _grid_alphas()
    records = []
    unavailable = 0
    for N, alphas in grid.items():
        assert len(alphas) == 25
        for a in alphas:
            records += check_invariance(a, N)
            # closed-form coordinates vs direct application, every (i, n)
            for family in ("J", "K"):
                for i in range(1, 5):
                    for n in range(1, N + 1):
                        if not action_expansion(family, i, n, a, N).available:
                            unavailable += 1
    elapsed = time.perf_counter() - t0
    print("criterion 1: %d records, %d coefficient-form gaps, %.1fs" % (len(records), unavailable, elapsed))
    assert not _failed(records)
    assert elapsed < 120


@pytest.mark.criterion(2, "exceptionality")
def test_exceptionality_witnesses():
    records = []
    for N, alphas in _grid_alphas().items():
        for a in alphas:
            records += check_exceptionality(a, N)
            assert any(not j_operator(i, a, N)(Poly([1])).is_poly() for i in range(1, 5))
    assert not _failed(records)


@pytest.mark.criterion(2, "exceptionality")
def test_boundary_leaves_space_directly():
    # J2..J4 and K2..K4 push the (N+1)-th element out of the (N+1)-space
    a, N = Fraction(7, 3), 4
    big = Basis([phi_tilde(n, a) for n in range(1, N + 2)])
    for i in (2, 3, 4):
        img = j_operator(i, a, N)(phi_tilde(N + 1, a))
        assert membership(img, big) is None
    bigk = Basis([chi_bar(n, a) for n in range(1, N + 2)])
    for i in (2, 3, 4):
        assert membership(k_operator(i, a, N)(chi_bar(N + 1, a)), bigk) is None


@pytest.mark.criterion(3, "kernels")
def test_kernels():
    for N, alphas in _grid_alphas(5).items():
        for a in alphas:
            ctx = ParamContext(a, N)
            Pm = build_P_minus(ctx).z_part
            assert all(Pm(phi_tilde(n, a)).is_zero() for n in range(1, N + 1))
            assert not Pm(phi_tilde(N + 1, a)).is_zero()
            Pp = build_P_plus(ctx).z_part
            ff = f_poly(a) * f_poly(a + N)
            assert all(Pp(RatFunc(chi_bar(n, a + N), ff)).is_zero() for n in range(1, N + 1))
            if N <= 6:
                assert kernel_dimension(Pm, N + 1) == N


@pytest.mark.criterion(4, "w-tilde closed form")
def test_w_tilde_closed_form():
    for N, alphas in _grid_alphas(5).items():
        for a in alphas:
            Pm = build_P_minus(ParamContext(a, N)).z_part
            f0, fN = f_poly(a), f_poly(a + N)
            expected = RatFunc(f0.deriv(), f0) * (-(N - 1)) - RatFunc(fN.deriv(), fN)
            assert Pm.coeff(N) == RatFunc(1)
            assert Pm.coeff(N - 1) == expected


@pytest.mark.criterion(5, "transpose construction")
def test_transpose_z_space():
    for N, alphas in _grid_alphas(4).items():
        for a in alphas:
            ch = build_P_plus(ParamContext(a, N))  # compares both routes internally
            assert ch.expand_product() == ch.z_part


@pytest.mark.criterion(6, "gauged consistency")
def test_gauged_consistency():
    records = []
    for N, alphas in _grid_alphas(3, range(3, 7)).items():
        for a in alphas:
            records += check_gauged_consistency(generic_ctx(a, N))
            records += check_gauged_consistency(ParamContext(a, N, a1=2))
            records += check_gauged_consistency(ParamContext(a, N, a2=Fraction(1, 2), a3=-3))
    assert not _failed(records)


# ---------------------------------------------------------------------------
# intertwining in the quadratic-extension algebra
# ---------------------------------------------------------------------------

INTERTWINING_ALPHAS = (Fraction(5, 2), Fraction(7, 3), Fraction(-9, 4))


def _contexts():
    for N in (3, 4, 5):
        for a in INTERTWINING_ALPHAS:
            yield "rational", ParamContext(a, N, a1=2)
            yield "hyperbolic", ParamContext(a, N, a2=Fraction(1, 2))
            yield "generic", generic_ctx(a, N)


@pytest.fixture(scope="module")
def intertwining():
    t0 = time.perf_counter()
    reports = [(label, ctx, verify_intertwining(ctx)) for label, ctx in _contexts()]
    return reports, time.perf_counter() - t0


@pytest.mark.slow
@pytest.mark.criterion(7, "intertwining")
def test_intertwining(intertwining):
    reports, elapsed = intertwining
    assert len(reports) == 27
    for label, ctx, rep in reports:
        for name in ("P-H- = H+P-", "P+H+ = H-P+"):
            assert rep["checks"][name]["zero"], (label, ctx.as_dict(), name, rep["checks"][name])
    print("criterion 7: 27 contexts in %.1fs" % elapsed)
    assert elapsed < 600


@pytest.mark.slow
@pytest.mark.criterion(5, "transpose construction")
def test_transpose_q_space(intertwining):
    for label, ctx, rep in intertwining[0]:
        assert rep["checks"]["P+ = (-1)^N P-^T"]["zero"], (label, ctx.as_dict())


# ---------------------------------------------------------------------------
# physical models
# ---------------------------------------------------------------------------

EX1 = ParamContext(2, 3, a1=2)
EX2 = ParamContext(2, 3, a2=Fraction(1, 2))


@pytest.mark.criterion(8, "rational model numerics")
def test_rational_model_value():
    m = M.make_model(1, EX1)
    assert abs(float(m.V("-", np.array([1.0]))[0]) - 547 / 200) < 1e-12


@pytest.mark.criterion(8, "rational model numerics")
def test_rational_shape_invariance():
    r = M.shape_invariance_check(EX1, np.linspace(0.2, 6.0, 100))
    assert abs(r["mean"] - 6) < 1e-12 and r["std"] < 1e-12
    assert r["exact_is_constant"] and r["exact_difference"] == "6"


@pytest.mark.criterion(8, "rational model numerics")
def test_rational_spectrum():
    assert restricted_matrix(EX1, "-").diagonal() == [4, 6, 8]
    for N in range(3, 7):
        ctx = ParamContext(Fraction(5, 2), N, a1=2)
        assert restricted_matrix(ctx, "-").diagonal() == [2 * (n + 1) for n in range(1, N + 1)]


@pytest.mark.criterion(8, "rational model numerics")
def test_rational_preservation_and_susy():
    m = M.make_model(1, EX1)
    for side in ("-", "+"):
        r = M.sector_preservation_numeric(m, side, h=1e-3)
        assert r["stencil"] == "5pt" and r["max_residual"] < 1e-6
    assert M.susy_breaking_classification(m) == "unbroken"


@pytest.mark.criterion(9, "hyperbolic model numerics")
def test_hyperbolic_value():
    m = M.make_model(2, EX2)
    assert abs(float(m.V("-", np.array([0.0]))[0]) - 25 / 4) < 1e-12


@pytest.mark.criterion(9, "hyperbolic model numerics")
def test_hyperbolic_preservation_and_susy():
    m = M.make_model(2, EX2)
    for side in ("-", "+"):
        assert M.sector_preservation_numeric(m, side, h=1e-3)["max_residual"] < 1e-6
    assert M.susy_breaking_classification(m) == "broken"


@pytest.mark.criterion(9, "hyperbolic model numerics")
def test_hyperbolic_no_singularity():
    for a in (Fraction(3, 2), 2, Fraction(7, 2), 6):
        assert M.no_singularity_check(M.make_model(2, ParamContext(a, 3, a2=Fraction(1, 2))))["ok"]


@pytest.mark.criterion(9, "hyperbolic model numerics")
def test_hyperbolic_scaling():
    m = M.make_model(2, EX2)
    for nu in (Fraction(1, 2), 4):
        r = M.scaling_relation_check(m, nu)
        assert max(r["errors"].values()) < 1e-12, r


# ---------------------------------------------------------------------------
# Laguerre relations and degenerate reductions
# ---------------------------------------------------------------------------

@pytest.mark.criterion(10, "laguerre relations")
@pytest.mark.parametrize("a", [2, Fraction(5, 2), 3, Fraction(-7, 3), Fraction(11, 4)])
def test_six_identities(a):
    second, first = second_kind_relations(a), first_kind_relations(a)
    assert len(second["rows"]) == 3 and len(first["rows"]) == 3
    assert all(r["eigen"] and r["matches_eigenpoly"] for r in second["rows"])
    assert all(r["eigen"] for r in first["rows"])


@pytest.mark.criterion(10, "laguerre relations")
def test_eigenpolys_reproduce_second_kind():
    a = Fraction(5, 2)
    ep = eigen_polys(ParamContext(a, 3, a1=1))
    for n, coords in second_kind_combinations(a).items():
        combo = Poly()
        for k, c in enumerate(coords, start=1):
            combo = combo + phi_tilde(k, a) * c
        assert ep[n - 1].poly == combo


@pytest.mark.criterion(10, "laguerre relations")
@pytest.mark.parametrize("a", [2, Fraction(5, 2), 3])
def test_gram_schmidt(a):
    r = gram_schmidt_support(ParamContext(a, 3, a1=1), 6)
    assert [row["n"] for row in r["rows"]] == list(range(1, 7))
    assert r["max_deviation"] < 1e-8, r["rows"]


@pytest.mark.criterion(11, "degenerate reductions")
def test_alpha_zero_identity():
    rep = degenerate_checks(0, 10)
    assert [c["n"] for c in rep["checks"]] == list(range(3, 11)) and rep["ok"]


@pytest.mark.criterion(11, "degenerate reductions")
def test_alpha_one_collapse():
    assert degenerate_checks(1, 10)["ok"]
    for n in range(1, 11):
        assert phi_tilde(n, 1) == Poly.monomial(n + 1, n - 1)
        # Euler operator z d/dz scales a monomial by its degree
        assert LinDiffOp({1: Poly([0, 1])})(phi_tilde(n, 1)) == RatFunc.from_poly(phi_tilde(n, 1) * (n + 1))
