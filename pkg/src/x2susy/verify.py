"""Verification stages shared by the CLI and the acceptance suite.

Each check produces a :class:`CheckRecord`; a stage is a list of them.  The
``anchor`` field names the identity being tested so a failing record can be
traced back to the statement it certifies.
"""

from __future__ import annotations

import random
import time
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Callable, Dict, Iterable, List, Optional, Sequence

from .exactalg import LinDiffOp, Poly, RatFunc
from .x2spaces import (
    Basis,
    ParamContext,
    ParamError,
    chi_bar,
    degenerate_checks,
    f_poly,
    fact1_cofactor,
    lowering_minus,
    membership,
    o_plus_factorizations,
    phi_tilde,
)

__all__ = [
    "CheckRecord",
    "VerificationReport",
    "STAGES",
    "sample_alphas",
    "generic_ctx",
    "stage_contexts",
    "run_stage",
    "run_verify",
    "check_spaces",
    "check_invariance",
    "check_exceptionality",
    "check_kernels",
    "check_w_tilde",
    "check_transpose",
    "check_gauged_consistency",
    "check_intertwining",
    "check_degenerate",
]

STAGES = ("spaces", "quasiops", "gauged", "physical", "models", "laguerre")


@dataclass
class CheckRecord:
    check_id: str
    anchor: str
    params: dict
    status: bool
    witness: object = None
    seconds: float = 0.0

    def as_dict(self) -> dict:
        d = asdict(self)
        d["status"] = "pass" if self.status else "fail"
        return d


@dataclass
class VerificationReport:
    records: List[CheckRecord] = field(default_factory=list)
    config: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(r.status for r in self.records)

    def extend(self, recs: Iterable[CheckRecord]) -> None:
        self.records.extend(recs)

    def as_dict(self, timings: bool = True) -> dict:
        recs = [r.as_dict() for r in self.records]
        if not timings:
            for r in recs:
                r.pop("seconds")
        return {"config": self.config, "overall": "pass" if self.ok else "fail", "records": recs}

    def failures(self) -> List[CheckRecord]:
        return [r for r in self.records if not r.status]


def _timed(check_id: str, anchor: str, params: dict, fn: Callable[[], tuple]) -> CheckRecord:
    """Run ``fn() -> (status, witness)``; domain errors become failed records."""
    t = time.perf_counter()
    try:
        status, witness = fn()
    except (ArithmeticError, ParamError) as exc:
        status, witness = False, "%s: %s" % (type(exc).__name__, exc)
    return CheckRecord(check_id, anchor, params, bool(status), witness, time.perf_counter() - t)


# ---------------------------------------------------------------------------
# Parameter sampling
# ---------------------------------------------------------------------------

def _admissible(a: Fraction, enn: int) -> bool:
    # every f(z; a+k) that a construction touches, plus the J4/K4 denominators
    if any(a + k in (0, 1) for k in range(-2, enn + 2)):
        return False
    return 2 * a + enn - 1 != 0 and 2 * a - enn - 1 != 0


def sample_alphas(rng: random.Random, count: int, enn: int, integers: bool = False) -> List[Fraction]:
    """Distinct random rationals ``p/q`` with ``|p/q| < 12`` that avoid every
    degenerate value any stage touches at fold number ``enn``."""
    out: List[Fraction] = []
    while len(out) < count:
        q = rng.randint(1, 9) if integers else rng.randint(2, 9)
        a = Fraction(rng.randint(-12 * q, 12 * q), q)
        if (not integers and a.denominator == 1) or a in out or not _admissible(a, enn):
            continue
        out.append(a)
    return out


def generic_ctx(alpha, enn: int) -> ParamContext:
    """A fixed all-``a_i``-nonzero parameter set."""
    return ParamContext(alpha, enn, a1=Fraction(3, 2), a2=Fraction(-2, 3), a3=Fraction(5, 4), a4=Fraction(2, 7), c0=Fraction(1, 3))


# ---------------------------------------------------------------------------
# Exact checks
# ---------------------------------------------------------------------------

def check_spaces(alpha, enn: int) -> List[CheckRecord]:
    a = Fraction(alpha)
    p = {"alpha": str(a), "enn": enn}

    def degrees():
        bad = [n for n in range(1, enn + 3) if phi_tilde(n, a).degree != n + 1 or chi_bar(n, a).degree != n + 1]
        return not bad, {"bad_n": bad}

    def factorization():
        d = LinDiffOp({1: 1, 0: -1})
        bad = [n for n in range(1, enn + 3) if d(phi_tilde(n, a)) != RatFunc.from_poly(fact1_cofactor(n, a))]
        return not bad, {"bad_n": bad}

    def independence():
        return len(Basis([phi_tilde(n, a) for n in range(1, enn + 1)])) == enn, None

    def lowering_chain():
        op = LinDiffOp.identity()
        for k in range(enn):
            op = lowering_minus(a + k) * op
        bad = [n for n in range(1, enn + 1) if not op(phi_tilde(n, a)).is_zero()]
        return not bad, {"bad_n": bad}

    def first_members():
        ok1 = phi_tilde(1, a) == f_poly(a + 1) * (a - 1)
        ok2 = chi_bar(1, a) == f_poly(a - 1) * (a * (a - 1))
        return ok1 and ok2, None

    def o_plus():
        for n in range(1, enn + 3):
            o_plus_factorizations(a, n)
        return True, None

    return [
        _timed("spaces.degree", "deg phi_n = deg chi_n = n+1", p, degrees),
        _timed("spaces.factorization", "(d/dz - 1) phi_n = -[(a+n-2) z - (n-1)(a+n)] z^(n-2) f(z;a)", p, factorization),
        _timed("spaces.independence", "phi_1..phi_N linearly independent", p, independence),
        _timed("spaces.lowering_chain", "N-fold lowering product annihilates phi_n, n <= N", p, lowering_chain),
        _timed("spaces.first_members", "phi_1 = (a-1) f(a+1), chi_1 = a(a-1) f(a-1)", p, first_members),
        _timed("spaces.o_plus", "O1, O2 chi_n = (cofactor) f(z;a)", p, o_plus),
    ]


def check_degenerate(n_max: int = 10) -> List[CheckRecord]:
    out = []
    for a, anchor in ((0, "a = 0 weighted sum of phi_k equals z^(n+1) - (n-1) 2^(n-2) z^3"), (1, "phi_n(z;1) = (n-1) z^(n+1)")):
        out.append(_timed("spaces.degenerate_%d" % a, anchor, {"alpha": str(a), "n_max": n_max}, lambda a=a: (degenerate_checks(a, n_max)["ok"], None)))
    return out


def check_invariance(alpha, enn: int) -> List[CheckRecord]:
    """Preservation of both spaces plus the action-formula cross-check for
    every ``J_i phi_n`` and ``K_i chi_n`` with ``n <= N``."""
    from .quasiops import action_expansion, j_operator, k_operator

    a = Fraction(alpha)
    p = {"alpha": str(a), "enn": enn}
    out = []
    for family, build, gen in (("J", j_operator, phi_tilde), ("K", k_operator, chi_bar)):
        def preserve(family=family, build=build, gen=gen):
            basis = Basis([gen(n, a) for n in range(1, enn + 1)])
            bad = []
            for i in range(1, 5):
                op = build(i, a, enn)
                bad += [(i, n) for n in range(1, enn + 1) if membership(op(gen(n, a)), basis) is None]
            return not bad, {"outside_span": bad}

        def formulas(family=family):
            unavailable = []
            for i in range(1, 5):
                for n in range(1, enn + 1):
                    exp = action_expansion(family, i, n, a, enn)
                    if not exp.available:
                        unavailable.append((i, n))
            return True, {"coefficient_form_unavailable": unavailable}

        space = "phi" if family == "J" else "chi"
        out.append(_timed("quasiops.preserve_%s" % family, "%s1..%s4 preserve span %s_1..%s_N" % (family, family, space, space), p, preserve))
        out.append(_timed("quasiops.actions_%s" % family, "%s_i action formulas equal direct coordinates" % family, p, formulas))
    return out


def check_exceptionality(alpha, enn: int) -> List[CheckRecord]:
    from .quasiops import direct_coordinates, j_operator, k_operator

    a = Fraction(alpha)
    p = {"alpha": str(a), "enn": enn}

    def not_polynomial():
        one = Poly([1])
        j = [i for i in range(1, 5) if not j_operator(i, a, enn)(one).is_poly()]
        k = [i for i in range(1, 5) if not k_operator(i, a, enn)(one).is_poly()]
        return bool(j) and bool(k), {"J_i(1) non-polynomial": j, "K_i(1) non-polynomial": k}

    def boundary():
        comps = {}
        for family in ("J", "K"):
            for i in (2, 3, 4):
                c = direct_coordinates(family, i, enn + 1, a, enn)
                comps["%s%d" % (family, i)] = str(c.get(1, 0)) if c is not None else "outside"
        ok = all(v not in ("0", "outside") for v in comps.values())
        return ok, {"raising_component_at_N+1": comps}

    return [
        _timed("quasiops.exceptional", "J_i 1 and K_i 1 leave the polynomials", p, not_polynomial),
        _timed("quasiops.boundary", "J2-4, K2-4 raise basis_(N+1) out of the N-space", p, boundary),
    ]


def check_kernels(alpha, enn: int, rank_check: bool = True) -> List[CheckRecord]:
    from .susybuild import build_P_minus, build_P_plus, kernel_dimension

    a = Fraction(alpha)
    p = {"alpha": str(a), "enn": enn}

    def minus():
        P = build_P_minus(ctx).z_part
        bad = [n for n in range(1, enn + 1) if not P(phi_tilde(n, a)).is_zero()]
        beyond = P(phi_tilde(enn + 1, a))
        return not bad and not beyond.is_zero(), {"nonzero_at_n<=N": bad}

    def plus():
        P = build_P_plus(ctx).z_part
        ff = f_poly(a) * f_poly(a + enn)
        bad = [n for n in range(1, enn + 1) if not P(RatFunc(chi_bar(n, a + enn), ff)).is_zero()]
        beyond = P(RatFunc(chi_bar(enn + 1, a + enn), ff))
        return not bad and not beyond.is_zero(), {"nonzero_at_n<=N": bad}

    def dimension():
        d = kernel_dimension(build_P_minus(ctx).z_part, enn + 1)
        return d == enn, {"kernel_dimension": d}

    ctx = ParamContext(a, enn)
    out = [
        _timed("gauged.kernel_minus", "P~- phi_n = 0 for n <= N, nonzero at N+1", p, minus),
        _timed("gauged.kernel_plus", "P+ annihilates chi_n(z;a+N)/(f(a) f(a+N)), n <= N", p, plus),
    ]
    if rank_check:
        out.append(_timed("gauged.kernel_dimension", "dim ker P~- on degree <= N+1 polynomials is N", p, dimension))
    return out


def check_w_tilde(alpha, enn: int) -> List[CheckRecord]:
    from .susybuild import build_P_minus, w_tilde, w_tilde_general

    a = Fraction(alpha)
    ctx = ParamContext(a, enn)
    p = {"alpha": str(a), "enn": enn}

    def coefficient():
        ch = build_P_minus(ctx)
        lead = ch.z_part.coeff(enn) == RatFunc(1)
        return lead and ch.z_part.coeff(enn - 1) == w_tilde(ctx) and ch.expand_product() == ch.z_part, None

    def general():
        return w_tilde_general(a, enn) == w_tilde(ctx), None

    return [
        _timed("gauged.w_tilde", "d^(N-1) coefficient of P~- = -(N-1) f'(a)/f(a) - f'(a+N)/f(a+N)", p, coefficient),
        _timed("gauged.w_tilde_sum", "term-by-term w~ sum equals the telescoped form", p, general),
    ]


def check_transpose(alpha, enn: int) -> List[CheckRecord]:
    from .susybuild import build_P_plus

    a = Fraction(alpha)
    p = {"alpha": str(a), "enn": enn}

    def product_vs_transpose():
        ch = build_P_plus(ParamContext(a, enn))  # raises on disagreement
        return ch.expand_product() == ch.z_part, None

    return [_timed("gauged.transpose", "product-form P+ = sum (-1)^(N-k) d^k o w_k", p, product_vs_transpose)]


def check_gauged_consistency(ctx: ParamContext) -> List[CheckRecord]:
    from .quasiops import build_check_H_plus
    from .susybuild import build_gauged_pair, verify_preservation_plus

    p = ctx.as_dict()

    def minus():
        build_gauged_pair(ctx)  # raises when H-bar- differs from H~-
        return True, None

    def plus():
        _, parts = build_check_H_plus(ctx)  # four routes, raises on mismatch
        return True, {"c0plus": str(parts.c0plus)}

    def preservation():
        rep = verify_preservation_plus(ctx)
        return rep["ok"] and (rep["triangular"] or not ctx.is_solvable()), {"triangular": rep["triangular"], "c0plus": rep["c0plus"]}

    return [
        _timed("gauged.h_minus", "gauged H-bar- reproduces H~-", p, minus),
        _timed("gauged.h_plus", "conjugated H-bar+ matches the expanded B+/C+ forms up to c0+", p, plus),
        _timed("gauged.preserve_plus", "check-H+ preserves chi_1..chi_N(z;a+N)", p, preservation),
    ]


def check_intertwining(ctx: ParamContext, label: str = "") -> List[CheckRecord]:
    from .qalgebra import verify_intertwining

    p = dict(ctx.as_dict(), label=label) if label else ctx.as_dict()
    t = time.perf_counter()
    try:
        rep = verify_intertwining(ctx)
    except (ArithmeticError, ParamError, ValueError) as exc:
        return [CheckRecord("physical.intertwining", "P-H- = H+P- and P+H+ = H-P+", p, False, str(exc), time.perf_counter() - t)]
    dt = time.perf_counter() - t
    out = []
    for name, res in rep["checks"].items():
        out.append(CheckRecord("physical." + name, name, p, res["zero"], res.get("nonzero_orders"), dt / len(rep["checks"])))
    return out


# ---------------------------------------------------------------------------
# Numeric stages
# ---------------------------------------------------------------------------

def check_models(alpha=2, enn: int = 3) -> List[CheckRecord]:
    from . import models as M
    from .laguerre import restricted_matrix

    out = []
    c1 = ParamContext(alpha, enn, a1=2)
    c2 = ParamContext(alpha, enn, a2=Fraction(1, 2))
    m1, m2 = M.make_model(1, c1), M.make_model(2, c2)
    p1, p2 = dict(c1.as_dict(), example=1), dict(c2.as_dict(), example=2)

    def crosscheck(m):
        r = M.potential_crosscheck(m)
        return r["ok"], r["errors"]

    def shape():
        r = M.shape_invariance_check(c1)
        ok = abs(r["mean"] - 2 * enn) < 1e-12 and r["std"] < 1e-12 and r["exact_is_constant"] and r["exact_difference"] == str(2 * enn)
        return ok, r

    def spectrum():
        d = restricted_matrix(c1, "-").diagonal()
        return d == [Fraction(2 * (n + 1)) for n in range(1, enn + 1)], [str(x) for x in d]

    def preservation(m):
        res = {s: M.sector_preservation_numeric(m, s)["max_residual"] for s in ("-", "+")}
        return max(res.values()) < 1e-6, res

    def classify(m, expected):
        c = M.susy_breaking_classification(m)
        return c == expected, c

    def singular():
        r = M.no_singularity_check(m2)
        return r["ok"], r

    def scaling():
        res = {str(nu): M.scaling_relation_check(m2, nu)["errors"] for nu in (Fraction(1, 2), 4)}
        return all(max(e.values()) < 1e-12 for e in res.values()), res

    def gd_kernel():
        r = M.gd_self_test()
        return r["ok"], r["max_error"]

    def eigen():
        r = M.eigenfunction_residuals(m1)
        return r["max_residual"] < 1e-6, r["max_residual"]

    out += [
        _timed("models.gd", "(gd q)' = 1/cosh q", {}, gd_kernel),
        _timed("models.ex1_crosscheck", "rational model closed forms equal the algebra", p1, lambda: crosscheck(m1)),
        _timed("models.ex1_shape", "V+(q;a) - V-(q;a+N) = 2N", p1, shape),
        _timed("models.ex1_spectrum", "restricted spectrum 2(n+1)", p1, spectrum),
        _timed("models.ex1_preservation", "H sector functions stay in the sector (rational)", p1, lambda: preservation(m1)),
        _timed("models.ex1_eigen", "eigenfunction Schrodinger residuals", p1, eigen),
        _timed("models.ex1_susy", "rational model SUSY unbroken", p1, lambda: classify(m1, "unbroken")),
        _timed("models.ex2_crosscheck", "hyperbolic model closed forms equal the algebra", p2, lambda: crosscheck(m2)),
        _timed("models.ex2_preservation", "H sector functions stay in the sector (hyperbolic)", p2, lambda: preservation(m2)),
        _timed("models.ex2_singular", "hyperbolic potentials finite at finite q", p2, singular),
        _timed("models.ex2_susy", "hyperbolic model SUSY broken", p2, lambda: classify(m2, "broken")),
        _timed("models.ex2_scaling", "V(q; nu a, nu c0) = nu V(sqrt(nu) q; a, c0)", p2, scaling),
    ]
    return out


def check_laguerre(alpha, n_max: int = 6, gram_schmidt: bool = True) -> List[CheckRecord]:
    from .laguerre import first_kind_relations, gram_schmidt_support, second_kind_relations

    a = Fraction(alpha)
    p = {"alpha": str(a)}
    out = [
        _timed("laguerre.second_kind", "second-kind combinations are J1 eigenvectors and eigenpolynomials", p, lambda: (second_kind_relations(a)["ok"], None)),
        _timed("laguerre.first_kind", "first-kind combinations are reflected-K1 eigenvectors", p, lambda: (first_kind_relations(a)["ok"], None)),
    ]
    if gram_schmidt and a > 1:
        def gs():
            r = gram_schmidt_support(ParamContext(a, 3, a1=1), n_max)
            return r["max_deviation"] < 1e-8, r["max_deviation"]

        out.append(_timed("laguerre.gram_schmidt", "Gram-Schmidt of phi_n reproduces the eigenpolynomials", dict(p, n_max=n_max), gs))
    return out


# ---------------------------------------------------------------------------
# Orchestration
# ---------------------------------------------------------------------------

def stage_contexts(enns: Sequence[int], samples: int, seed: int) -> Dict[int, List[Fraction]]:
    rng = random.Random(seed)
    return {N: sample_alphas(rng, samples, N) for N in enns}


def run_stage(stage: str, enns: Sequence[int], samples: int, seed: int, alpha: Optional[Fraction] = None) -> List[CheckRecord]:
    """Run one stage over ``samples`` random ``alpha`` per fold number, or the
    single ``alpha`` when given."""
    if stage not in STAGES:
        raise ValueError("unknown stage %r (choose from %s)" % (stage, ", ".join(STAGES)))
    grid = {N: [Fraction(alpha)] for N in enns} if alpha is not None else stage_contexts(enns, samples, seed)
    recs: List[CheckRecord] = []
    if stage == "spaces":
        for N, alphas in grid.items():
            for a in alphas:
                recs += check_spaces(a, N)
        recs += check_degenerate(10)
    elif stage == "quasiops":
        for N, alphas in grid.items():
            for a in alphas:
                recs += check_invariance(a, N) + check_exceptionality(a, N)
    elif stage == "gauged":
        for N, alphas in grid.items():
            for a in alphas:
                recs += check_kernels(a, N, rank_check=N <= 6) + check_w_tilde(a, N) + check_transpose(a, N)
                recs += check_gauged_consistency(generic_ctx(a, N))
    elif stage == "physical":
        for N, alphas in grid.items():
            for a in alphas:
                recs += check_intertwining(ParamContext(a, N, a1=2), "rational")
                recs += check_intertwining(ParamContext(a, N, a2=Fraction(1, 2)), "hyperbolic")
                recs += check_intertwining(generic_ctx(a, N), "generic")
    elif stage == "models":
        recs += check_models(2 if alpha is None else alpha, 3 if alpha is None else min(enns))
    elif stage == "laguerre":
        for a in ((2, Fraction(5, 2), 3) if alpha is None else (alpha,)):
            recs += check_laguerre(a)
    return recs


def run_verify(stages: Sequence[str], enns: Sequence[int], samples: int, seed: int, alpha=None) -> VerificationReport:
    report = VerificationReport(config={"stages": list(stages), "enn": list(enns), "samples": samples, "seed": seed, "alpha": None if alpha is None else str(alpha)})
    for st in stages:
        report.extend(run_stage(st, enns, samples, seed, alpha))
    return report
