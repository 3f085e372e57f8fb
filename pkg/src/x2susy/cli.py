"""Command-line front end.

Subcommands: ``verify``, ``potential``, ``spectrum``, ``sector``, ``show-op``,
``laguerre``.  Exit status is 0 on success, 1 when a check fails and 2 on
invalid input.

Every option may also come from an INI file given with ``--config``; keys
live in a ``[run]`` section and use the long option name with dashes turned
into underscores (``q_min = 0.5``).  Flags on the command line win over the
file.  ``X2SUSY_OUTPUT_DIR`` is prepended to relative ``--output`` paths and
``X2SUSY_PREC_BITS`` sets the float precision of the model evaluators.
"""

from __future__ import annotations

import argparse
import configparser
import csv
import io
import json
import os
import sys
from fractions import Fraction
from typing import Dict, List, Optional, Sequence

import numpy as np

from .exactalg import DomainError, diffop_to_json, poly_to_json, rat
from .x2spaces import ParamContext, ParamError

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2

DEFAULTS = {
    "alpha": "2",
    "enn": "3",
    "a1": None,
    "a2": None,
    "a3": None,
    "a4": None,
    "c0": "0",
    "example": None,
    "q_min": None,
    "q_max": None,
    "steps": "100",
    "samples": "8",
    "seed": "0",
    "output": None,
    "format": None,
    "stage": None,
    "side": "-",
    "family": "J",
    "index": "1",
    "n_max": "6",
    "precision": None,
}


class InputError(Exception):
    """Bad user input; maps to exit status 2."""


# ---------------------------------------------------------------------------
# Configuration
# ---------------------------------------------------------------------------

def _load_config(path: Optional[str]) -> Dict[str, str]:
    if not path:
        return {}
    cp = configparser.ConfigParser()
    try:
        with open(path) as fh:
            cp.read_file(fh)
    except OSError as exc:
        raise InputError("cannot read config file %s: %s" % (path, exc))
    if not cp.has_section("run"):
        raise InputError("config file %s has no [run] section" % path)
    out = {}
    for k, v in cp.items("run"):
        key = k.replace("-", "_")
        if key not in DEFAULTS and key not in ("thorough", "timings"):
            raise InputError("unknown config key %r in %s" % (k, path))
        out[key] = v
    return out


def resolve(args: argparse.Namespace) -> dict:
    """Merge builtin defaults, the config file and explicit flags."""
    cfg = dict(DEFAULTS)
    cfg.update(_load_config(getattr(args, "config", None)))
    for k, v in vars(args).items():
        if v is not None and k not in ("config", "func"):
            cfg[k] = v
    for flag in ("thorough", "timings"):
        v = cfg.get(flag, False)
        cfg[flag] = v if isinstance(v, bool) else str(v).lower() in ("1", "true", "yes", "on")
    return cfg


def _rational(cfg: dict, key: str) -> Optional[Fraction]:
    v = cfg.get(key)
    if v is None:
        return None
    try:
        return rat(v)
    except (ValueError, ZeroDivisionError, TypeError):
        raise InputError("%s must be a rational like 5/2, got %r" % (key, v))


def _int(cfg: dict, key: str) -> int:
    try:
        return int(cfg[key])
    except (TypeError, ValueError):
        raise InputError("%s must be an integer, got %r" % (key, cfg[key]))


def _float(cfg: dict, key: str, default: float) -> float:
    v = cfg.get(key)
    try:
        return default if v is None else float(Fraction(str(v)))
    except (ValueError, ZeroDivisionError):
        raise InputError("%s must be a number, got %r" % (key, v))


def _example(cfg: dict) -> Optional[int]:
    if cfg.get("example") is None:
        return None
    e = _int(cfg, "example")
    if e not in (1, 2):
        raise InputError("example must be 1 or 2")
    return e


def build_ctx(cfg: dict) -> ParamContext:
    """``ParamContext`` from the merged config; ``--example`` fixes the
    ``a_i`` pattern (a1 = 2 or a2 = 1/2) unless overridden."""
    ex = _example(cfg)
    coeffs = {k: _rational(cfg, k) for k in ("a1", "a2", "a3", "a4")}
    if ex == 1 and coeffs["a1"] is None:
        coeffs["a1"] = Fraction(2)
    if ex == 2 and coeffs["a2"] is None:
        coeffs["a2"] = Fraction(1, 2)
    coeffs = {k: (v if v is not None else Fraction(0)) for k, v in coeffs.items()}
    return ParamContext(_rational(cfg, "alpha"), _int(cfg, "enn"), c0=_rational(cfg, "c0"), **coeffs)


def _precision(cfg: dict) -> Optional[int]:
    return None if cfg.get("precision") is None else _int(cfg, "precision")


# ---------------------------------------------------------------------------
# Output
# ---------------------------------------------------------------------------

def _output_path(cfg: dict) -> Optional[str]:
    path = cfg.get("output")
    if not path:
        return None
    base = os.environ.get("X2SUSY_OUTPUT_DIR")
    if base and not os.path.isabs(path):
        os.makedirs(base, exist_ok=True)
        path = os.path.join(base, path)
    return path


def _emit(text: str, cfg: dict) -> None:
    path = _output_path(cfg)
    if path is None:
        sys.stdout.write(text)
        return
    try:
        with open(path, "w", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise OSError("cannot write %s: %s" % (path, exc)) from exc
    print("wrote %s" % path)


def _table(header: Sequence[str], rows: List[Sequence], fmt: str, meta: Optional[dict] = None) -> str:
    if fmt == "json":
        return json.dumps({"metadata": meta or {}, "columns": list(header), "rows": [list(r) for r in rows]}, indent=1, sort_keys=True) + "\n"
    if fmt == "markdown":
        lines = ["| " + " | ".join(header) + " |", "|" + "---|" * len(header)]
        lines += ["| " + " | ".join(str(x) for x in r) + " |" for r in rows]
        return "\n".join(lines) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)
        return buf.getvalue()
    raise InputError("format must be csv, json or markdown")


def _fmt(cfg: dict, default: str) -> str:
    fmt = cfg.get("format") or default
    if fmt not in ("csv", "json", "markdown"):
        raise InputError("format must be csv, json or markdown, got %r" % fmt)
    return fmt


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------

def cmd_verify(cfg: dict) -> int:
    from .verify import STAGES, run_verify

    stage = cfg.get("stage")
    stages = list(STAGES) if stage in (None, "all") else [s.strip() for s in str(stage).split(",")]
    bad = [s for s in stages if s not in STAGES]
    if bad:
        raise InputError("unknown stage(s) %s; choose from %s" % (", ".join(bad), ", ".join(STAGES)))
    thorough = cfg["thorough"]
    explicit_enn = "enn" in cfg.get("_explicit", ())
    enns = [_int(cfg, "enn")] if explicit_enn else (list(range(3, 9)) if thorough else [3, 4, 5])
    # validates enn and alpha even when sampling
    alpha = _rational(cfg, "alpha") if "alpha" in cfg.get("_explicit", ()) else None
    for N in enns:
        ParamContext(alpha if alpha is not None else Fraction(5, 2), N)
    samples = 25 if thorough and "samples" not in cfg.get("_explicit", ()) else _int(cfg, "samples")
    report = run_verify(stages, enns, samples, _int(cfg, "seed"), alpha)
    fmt = _fmt(cfg, "json")
    data = report.as_dict(timings=cfg["timings"])
    if fmt == "json":
        text = json.dumps(data, indent=1, sort_keys=True, default=str) + "\n"
    else:
        header = ["check_id", "anchor", "status", "params", "witness"] + (["seconds"] if cfg["timings"] else [])
        rows = []
        for r in data["records"]:
            row = [r["check_id"], r["anchor"], r["status"], json.dumps(r["params"], sort_keys=True), json.dumps(r["witness"], sort_keys=True, default=str)]
            if cfg["timings"]:
                row.append("%.3f" % r["seconds"])
            rows.append(row)
        text = _table(header, rows, fmt)
        if fmt == "markdown":
            text += "\noverall: %s\n" % data["overall"]
    _emit(text, cfg)
    fails = report.failures()
    print("%d checks, %d failed: %s" % (len(report.records), len(fails), data["overall"]), file=sys.stderr)
    for r in fails:
        print("FAIL %s [%s] %s %s" % (r.check_id, r.anchor, r.params, r.witness), file=sys.stderr)
    return EXIT_OK if report.ok else EXIT_FAIL


def _model(cfg: dict):
    from .models import make_model

    ex = _example(cfg)
    if ex is None:
        raise InputError("--example 1 or 2 is required")
    return make_model(ex, build_ctx(cfg), _precision(cfg))


def _grid(cfg: dict, model) -> np.ndarray:
    lo = _float(cfg, "q_min", 0.5 if model.example_id == 1 else -3.0)
    hi = _float(cfg, "q_max", 4.0 if model.example_id == 1 else 3.0)
    steps = _int(cfg, "steps")
    if steps < 2 or not hi > lo:
        raise InputError("grid needs steps >= 2 and q_max > q_min")
    if model.example_id == 1 and lo <= 0:
        raise InputError("the rational model lives on q > 0; q_min must be positive")
    return np.linspace(lo, hi, steps)


def cmd_potential(cfg: dict) -> int:
    from .models import export_tables, sector_functions

    model = _model(cfg)
    grid = _grid(cfg, model)
    fmt = _fmt(cfg, "csv")
    meta = {"command": "potential", "precision_bits": model.precision, "c0": str(model.ctx.c0)}
    path = _output_path(cfg)
    if path is not None and fmt in ("csv", "json"):
        export_tables(model, grid, path, fmt, meta)
        print("wrote %s" % path)
        return EXIT_OK
    psis = sector_functions(model, "-")
    vm, vp = model.num.to_float(model.V("-", grid)), model.num.to_float(model.V("+", grid))
    header = ["q", "V_minus", "V_plus"] + ["psi_%d" % (i + 1) for i in range(len(psis))]
    cols = [grid, vm, vp] + [p(grid) for p in psis]
    rows = [[repr(float(x)) for x in r] for r in zip(*cols)]
    _emit(_table(header, rows, fmt, dict(meta, example=model.example_id, params=model.ctx.as_dict())), cfg)
    return EXIT_OK


def cmd_spectrum(cfg: dict) -> int:
    from .laguerre import restricted_matrix

    ctx = build_ctx(cfg)
    side = cfg.get("side", "-")
    if side not in ("-", "+"):
        raise InputError("side must be - or +")
    m = restricted_matrix(ctx, side)
    if m.is_upper_triangular():
        eig = [(str(x), float(x)) for x in m.diagonal()]
        exact = True
    else:
        vals = np.linalg.eigvals(np.array([[float(x) for x in r] for r in m.entries]))
        vals = sorted(vals, key=lambda v: (v.real, v.imag))
        eig = [("", complex(v) if abs(v.imag) > 1e-12 else float(v.real)) for v in vals]
        exact = False
    rows = [[i + 1, e[0], repr(e[1])] for i, e in enumerate(eig)]
    meta = {"params": ctx.as_dict(), "side": side, "triangular": m.is_upper_triangular(), "matrix": [[str(x) for x in r] for r in m.entries]}
    fmt = _fmt(cfg, "markdown")
    _emit(_table(["n", "exact", "value"], rows, fmt, meta), cfg)
    if not exact:
        print("restricted matrix is not triangular; eigenvalues are numerical", file=sys.stderr)
    return EXIT_OK


def cmd_sector(cfg: dict) -> int:
    from .models import sector_functions, sector_l2_report, sector_preservation_numeric, susy_breaking_classification

    model = _model(cfg)
    side = cfg.get("side", "-")
    if side not in ("-", "+"):
        raise InputError("side must be - or +")
    grid = _grid(cfg, model)
    psis = sector_functions(model, side)
    rows = [[repr(float(q))] + [repr(float(v)) for v in vals] for q, *vals in zip(grid, *[p(grid) for p in psis])]
    pres = sector_preservation_numeric(model, side)
    meta = {
        "params": model.ctx.as_dict(),
        "side": side,
        "classification": susy_breaking_classification(model),
        "square_integrable": sector_l2_report(model),
        "preservation_residual": pres["max_residual"],
    }
    _emit(_table(["q"] + ["psi_%d" % (i + 1) for i in range(len(psis))], rows, _fmt(cfg, "csv"), meta), cfg)
    print("SUSY %s; preservation residual %.2e" % (meta["classification"], pres["max_residual"]), file=sys.stderr)
    return EXIT_OK if pres["ok"] else EXIT_FAIL


def cmd_show_op(cfg: dict) -> int:
    from .quasiops import build_J, build_K, fractional_part, o_plus_decomposition

    ctx = build_ctx(cfg)
    family = str(cfg.get("family", "J")).upper()
    if family not in ("J", "K"):
        raise InputError("family must be J or K")
    i = _int(cfg, "index")
    if i not in (1, 2, 3, 4):
        raise InputError("index must be 1..4")
    op = (build_J if family == "J" else build_K)(i, ctx)
    frac = fractional_part(op)
    fmt = _fmt(cfg, "markdown")
    if fmt == "json":
        data = {"family": family, "index": i, "params": ctx.as_dict(), "operator": diffop_to_json(op), "fractional_part": diffop_to_json(frac)}
        if family == "K":
            dec = o_plus_decomposition(op, ctx.alpha)
            data["o_plus"] = None if dec is None else {"O1": poly_to_json(dec[0]), "O2": poly_to_json(dec[1])}
        _emit(json.dumps(data, indent=1, sort_keys=True) + "\n", cfg)
        return EXIT_OK
    rows = []
    for k in sorted(op.coeffs, reverse=True):
        c = op.coeffs[k]
        q, r = c.num.divmod(c.den)
        rows.append(["d^%d" % k, q.pretty(), "0" if r.is_zero() else "(%s)/(%s)" % (r.pretty(), c.den.pretty())])
    text = _table(["order", "polynomial part", "fractional part"], rows, fmt)
    if family == "K":
        dec = o_plus_decomposition(op, ctx.alpha)
        if dec is not None:
            text += "\nfractional part = (1/f) [(%s) O1 + (%s) O2]\n" % (dec[0].pretty(), dec[1].pretty())
    _emit(text, cfg)
    return EXIT_OK


def cmd_laguerre(cfg: dict) -> int:
    from .laguerre import first_kind_relations, gram_schmidt_support, second_kind_relations

    a = _rational(cfg, "alpha")
    if a in (0, 1):
        raise InputError("degenerate alpha = %s: alpha != 0, 1 is required" % a)
    n_max = _int(cfg, "n_max")
    rows = []
    ok = True
    for rep in (second_kind_relations(a), first_kind_relations(a)):
        for r in rep["rows"]:
            good = r["eigen"] and r.get("matches_eigenpoly", True)
            ok = ok and good
            rows.append(["kind %d" % rep["kind"], r["n"], " ".join(r["coords"]), "exact match" if good else "MISMATCH"])
    gs = None
    if a > 1:
        gs = gram_schmidt_support(ParamContext(a, 3, a1=1), n_max)
        for r in gs["rows"]:
            rows.append(["gram-schmidt", r["n"], gs["weight"], "deviation %.3e" % r["deviation"]])
        ok = ok and gs["max_deviation"] < 1e-8
    meta = {"alpha": str(a), "n_max": n_max, "note": gs["label"] if gs else "Gram-Schmidt needs alpha > 1"}
    _emit(_table(["relation", "n", "coefficients", "result"], rows, _fmt(cfg, "markdown"), meta), cfg)
    return EXIT_OK if ok else EXIT_FAIL


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------

def _params(p: argparse.ArgumentParser) -> None:
    p.add_argument("--alpha", help="rational, e.g. 5/2")
    p.add_argument("--enn", help="fold number, > 2")
    for k in ("a1", "a2", "a3", "a4", "c0"):
        p.add_argument("--" + k, help="rational")
    p.add_argument("--example", help="1 (a1 = 2) or 2 (a2 = 1/2)")


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="INI file with a [run] section")
    p.add_argument("--output", "-o", help="output file (default stdout)")
    p.add_argument("--format", choices=("csv", "json", "markdown"))
    p.add_argument("--precision", help="binary precision of model evaluators (53 or e.g. 113)")


def _grid_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--q-min", dest="q_min")
    p.add_argument("--q-max", dest="q_max")
    p.add_argument("--steps")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="x2susy", description="X2 quasi-solvable operators and their N-fold SUSY.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", help="run verification stages")
    _params(p)
    _common(p)
    p.add_argument("--stage", help="comma list of stages or 'all'")
    p.add_argument("--samples", help="random alpha values per fold number")
    p.add_argument("--seed")
    p.add_argument("--thorough", action="store_true", default=None, help="N = 3..8 with 25 samples")
    p.add_argument("--timings", action="store_true", default=None, help="include wall times (breaks byte-identical output)")
    p.set_defaults(func=cmd_verify)

    for name, func, helptext in (
        ("potential", cmd_potential, "tabulate V-, V+ and the minus sector"),
        ("sector", cmd_sector, "tabulate sector functions"),
    ):
        p = sub.add_parser(name, help=helptext)
        _params(p)
        _common(p)
        _grid_args(p)
        if name == "sector":
            p.add_argument("--side", choices=("-", "+"))
        p.set_defaults(func=func)

    p = sub.add_parser("spectrum", help="restricted-matrix eigenvalues")
    _params(p)
    _common(p)
    p.add_argument("--side", choices=("-", "+"))
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("show-op", help="print J_i or K_i")
    _params(p)
    _common(p)
    p.add_argument("--family", choices=("J", "K", "j", "k"))
    p.add_argument("--index")
    p.set_defaults(func=cmd_show_op)

    p = sub.add_parser("laguerre", help="Laguerre relations and Gram-Schmidt support")
    _common(p)
    p.add_argument("--alpha")
    p.add_argument("--n-max", dest="n_max")
    p.set_defaults(func=cmd_laguerre)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = resolve(args)
        cfg["_explicit"] = {k for k, v in vars(args).items() if v is not None} | set(_load_config(args.config))
        return args.func(cfg)
    except (InputError, ParamError, DomainError, ValueError) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return EXIT_INPUT
    except OSError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return EXIT_INPUT
    except ArithmeticError as exc:
        print("check failed: %s" % exc, file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
