"""Command-line front end: ``xracah {table,weights,verify,zeros,limits}``.

Exit status is 0 when everything requested passed, 1 when a check or limit
failed, and 2 for usage errors (bad flags, malformed or inadmissible
parameters).
"""

from __future__ import annotations

import argparse
import os
import sys
from fractions import Fraction
from typing import List, Optional

from . import base, checks
from . import deformed as dfm
from . import limits as lim
from .families import (FAULT_NAMES, FAMILY_NAMES, FamilySpec, ParameterError, make_spec,
                       parse_int_range, parse_rational_list, shift_lambda, validate_parameters)
from .scalar import BackendError, parse_backend
from .serialize import DEFAULT_DIGITS, dumps, poly_to_json, rows_to_csv, rows_to_text
from .verify import run_suite

PRECISION_ENV = "XRACAH_PRECISION"


class UsageError(Exception):
    pass


def _default_precision() -> int:
    raw = os.environ.get(PRECISION_ENV, "256")
    try:
        return int(raw)
    except ValueError as exc:
        raise UsageError(f"{PRECISION_ENV} must be an integer, got {raw!r}") from exc


def _list(text: Optional[str]) -> List[str]:
    return [] if not text else [p.strip() for p in text.split(",") if p.strip()]


# --- argument parsing ----------------------------------------------------------

def _add_system(p: argparse.ArgumentParser, ell: bool = True):
    p.add_argument("--family", required=True, choices=FAMILY_NAMES)
    p.add_argument("--params", required=True, help="comma-separated parameters, e.g. -8,10,2,3/2")
    p.add_argument("--N", type=int, help="grid size (finite families)")
    p.add_argument("--q", help="base q (q-families)")
    if ell:
        p.add_argument("--ell", default="", help="deformation indices, e.g. 1,2 or 1..3")
    p.add_argument("--backend", default="exact", help="exact | float | float:<bits>")
    p.add_argument("--force", action="store_true", help="run even when parameters are out of range")
    p.add_argument("--window", type=int, default=24, help="grid window for little q-Jacobi")
    p.add_argument("--trunc-tol", default="1e-30", help="tail bound for truncated sums")


def _add_output(p: argparse.ArgumentParser, formats=("json", "csv", "text"), default="text"):
    p.add_argument("--format", choices=formats, default=default)
    p.add_argument("--output", "-o", help="output path (default: stdout)")
    p.add_argument("--digits", type=int, default=DEFAULT_DIGITS, help="significant digits in CSV")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="xracah", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("table", help="eta-basis coefficients and grid values of the polynomials")
    _add_system(p)
    p.add_argument("--n", default="0..3", help="degrees, e.g. 0..6")
    _add_output(p, default="json")

    p = sub.add_parser("weights", help="potentials, weights and norms on the grid")
    _add_system(p)
    p.add_argument("--n", default="0..3")
    _add_output(p)

    p = sub.add_parser("verify", help="run the identity suite")
    _add_system(p)
    p.add_argument("--checks", help="comma-separated check names or groups (default: all)")
    p.add_argument("--inject-fault", action="append", default=[], choices=FAULT_NAMES,
                   help="double one closed-form constant (repeatable)")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--n-max", type=int, default=5, help="degrees checked on the infinite grid")
    _add_output(p, formats=("json", "text"))

    p = sub.add_parser("zeros", help="Sturm root counts of the exceptional polynomials")
    _add_system(p)
    _add_output(p)

    p = sub.add_parser("limits", help="limit sweeps between families (float backend)")
    p.add_argument("--which", required=True, choices=lim.LIMIT_NAMES)
    p.add_argument("--params", help="target parameters (default per limit)")
    p.add_argument("--q", default="1/2")
    p.add_argument("--N", type=int)
    p.add_argument("--t", help="t values for qR-to-dqH, e.g. 1e-2,1e-4,1e-6")
    p.add_argument("--q-seq", help="q values for the q -> 1 limits")
    p.add_argument("--k", default="4..10", help="q = 1 - 2^-k when --q-seq is absent")
    p.add_argument("--N-seq", default="8,12,16", help="grid sizes for qR-to-lqJ")
    p.add_argument("--window", type=int, default=4)
    p.add_argument("--tol", default=lim.DEFAULT_TOL)
    p.add_argument("--prec", type=int, help=f"bits (default ${PRECISION_ENV} or 256)")
    _add_output(p)
    return parser


# --- shared helpers ------------------------------------------------------------------

def _spec_from(args) -> FamilySpec:
    backend = parse_backend(args.backend, _default_precision())
    params = parse_rational_list(args.params) if backend.exact else _list(args.params)
    if args.q is not None and backend.exact:
        parse_rational_list(args.q)
    spec = make_spec(args.family, params, N=args.N, q=args.q, backend=backend)
    violations = validate_parameters(spec)
    if violations and not args.force:
        raise UsageError("parameters out of range: " + "; ".join(violations))
    return spec


def _ells(args, spec: FamilySpec) -> List[int]:
    ells = parse_int_range(args.ell) if args.ell else []
    for e in ells:
        if e < 0 or (spec.finite and e > spec.N - 1):
            raise UsageError(f"ell={e} outside 0..{spec.N - 1}")
    return ells


def _options(args, spec: FamilySpec, n_max: int = 5) -> checks.SuiteOptions:
    try:
        tol = Fraction(args.trunc_tol)
    except ValueError as exc:
        raise UsageError(f"bad --trunc-tol {args.trunc_tol!r}") from exc
    return checks.SuiteOptions(window=args.window, trunc_tol=tol, lqj_n_max=n_max)


def _emit(args, text: str):
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _render(args, payload: dict, rows: list) -> str:
    if args.format == "json":
        return dumps(payload) + "\n"
    if args.format == "csv":
        return rows_to_csv(rows, args.digits)
    return rows_to_text(rows)


def _grid(spec: FamilySpec, ell: int, opts: checks.SuiteOptions):
    """Grid for tables, plus the certified tail bound on the infinite grid."""
    if spec.finite:
        return dfm.deformed_grid(spec, ell) if ell else base.grid(spec), None
    if ell:
        xi_poly = dfm.deforming_xi(spec, ell, require_positive=False).poly
        X, bound = checks.certified_cutoff(shift_lambda(spec, ell), 1, xi_poly, 1, opts, 0)
    else:
        X, bound = checks.certified_cutoff(spec, 1, None, 1, opts, 0)
    return range(X + 1), bound


# --- subcommands ---------------------------------------------------------------

def cmd_table(args) -> int:
    spec = _spec_from(args)
    ells = _ells(args, spec) or [0]
    ns = parse_int_range(args.n)
    opts = _options(args, spec)
    polys, rows = [], []
    tails = {}
    for ell in ells:
        xs, tail = _grid(spec, ell, opts)
        if tail is not None:
            tails[str(ell)] = tail
        basis = shift_lambda(spec, ell)
        top_n = (spec.N - ell) if spec.finite else None
        for n in ns:
            if top_n is not None and n > top_n:
                raise UsageError(f"n={n} exceeds {top_n} for ell={ell}")
            if ell:
                poly = dfm.exceptional_P(spec, ell, n, strict=False).poly
                values = [dfm.p_ell_check(spec, ell, n, x) for x in xs]
            else:
                poly = base.p_poly(spec, n)
                values = [base.p_check(spec, n, x) for x in xs]
            polys.append({"ell": ell, "n": n, "degree": poly.degree,
                          "basis": "eta(x; lambda + ell delta)",
                          "coefficients": poly_to_json(poly),
                          "eta": [base.eta(basis, x) for x in xs], "values": values})
            for k, c in enumerate(poly.coeffs):
                rows.append({"kind": "coefficient", "ell": ell, "n": n, "index": k, "eta": None, "value": c})
            for x, v in zip(xs, values):
                rows.append({"kind": "value", "ell": ell, "n": n, "index": x, "eta": base.eta(basis, x),
                             "value": v})
    payload = {"spec": spec.describe(), "polynomials": polys}
    if tails:
        payload["tail_bound"] = tails
        payload["trunc_tol"] = args.trunc_tol
    _emit(args, _render(args, payload, rows))
    return 0


def cmd_weights(args) -> int:
    spec = _spec_from(args)
    ells = _ells(args, spec) or [0]
    ns = parse_int_range(args.n)
    opts = _options(args, spec)
    rows, norms, tails = [], [], {}
    for ell in ells:
        xs, tail = _grid(spec, ell, opts)
        if tail is not None:
            tails[str(ell)] = tail
        for x in xs:
            if ell:
                rows.append({"ell": ell, "x": x, "eta": base.eta(shift_lambda(spec, ell), x),
                             "B": dfm.B_ell(spec, ell, x), "D": dfm.D_ell(spec, ell, x),
                             "xi": dfm.xi(spec, ell, x), "weight": dfm.deformed_weight(spec, ell, x)})
            else:
                rows.append({"ell": 0, "x": x, "eta": base.eta(spec, x), "B": base.B(spec, x),
                             "D": base.D(spec, x), "xi": None, "weight": base.phi0_sq(spec, x)})
        for n in ns:
            if spec.finite and n > spec.N - ell:
                continue
            parts = dfm.deformed_norm_parts(spec, ell, n) if ell else base.norm_parts(spec, n)
            norms.append({"ell": ell, "n": n, "dn2": parts.value(), "finite_factor": parts.finite,
                          "inf_num": list(parts.inf_num), "inf_den": list(parts.inf_den)})
    payload = {"spec": spec.describe(), "grid": rows, "norms": norms}
    if tails:
        payload["tail_bound"] = tails
    _emit(args, _render(args, payload, rows))
    return 0


def cmd_verify(args) -> int:
    spec = _spec_from(args)
    ells = _ells(args, spec)
    if args.inject_fault:
        spec = spec.with_faults(*args.inject_fault)
    names = _list(args.checks) or None
    try:
        checks.resolve_checks(names)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    report = run_suite(spec, ells, names, jobs=args.jobs, options=_options(args, spec, args.n_max),
                       force=args.force)
    _emit(args, report.to_json() + "\n" if args.format == "json" else report.to_text())
    if not report.passed:
        failed = ", ".join(sorted({c.name for c in report.failures}))
        print(f"failed checks: {failed}", file=sys.stderr)
        return 1
    return 0


def cmd_zeros(args) -> int:
    spec = _spec_from(args)
    if not spec.backend.exact:
        raise UsageError("root counting needs the exact backend")
    ells = _ells(args, spec) or [1]
    opts = _options(args, spec)
    rows = []
    ok = True
    for ell in ells:
        if ell < 1:
            raise UsageError("zeros needs ell >= 1")
        lam_l = shift_lambda(spec, ell)
        hi = base.eta(lam_l, spec.N - ell) if spec.finite else lam_l.scalar(1)
        for n, count in checks.sturm_counts(spec, ell, opts).items():
            ok = ok and count == n
            rows.append({"ell": ell, "n": n, "degree": ell + n, "interval_end": hi,
                         "roots_in_interval": count, "expected": n})
    _emit(args, _render(args, {"spec": spec.describe(), "zeros": rows}, rows))
    return 0 if ok else 1


def _limit_kwargs(args, prec: int) -> dict:
    which = args.which
    if which == "qR-to-dqH":
        params = _list(args.params) or ["1/2", "1/4"]
        return dict(q=args.q, params=params, N=args.N or 4,
                    t_sequence=_list(args.t) or ["1e-2", "1e-4", "1e-6"], prec=prec, strict=False)
    qs = None
    if args.q_seq:
        qs = _list(args.q_seq)
    elif which in ("qR-to-R", "dqH-to-dH"):
        qs = lim.q_sequence(parse_int_range(args.k), prec)
    if which == "qR-to-R":
        params = _list(args.params) or ["-8", "10", "2", "3/2"]
        return dict(params=params, qs=qs, tol=args.tol, prec=prec, strict=False)
    if which == "dqH-to-dH":
        params = _list(args.params) or ["1", "2"]
        return dict(params=params, N=args.N or 4, qs=qs, tol=args.tol, prec=prec, strict=False)
    params = _list(args.params) or ["1/2", "1/2"]
    return dict(q=args.q, params=params, N_sequence=parse_int_range(args.N_seq), window=args.window,
                prec=prec, strict=False)


def cmd_limits(args) -> int:
    prec = args.prec or _default_precision()
    report = lim.run_limit(args.which, **_limit_kwargs(args, prec))
    _emit(args, _render(args, report.to_dict(), report.rows()))
    if not report.passed:
        print(f"{report.name}: {report.reason}", file=sys.stderr)
        return 1
    return 0


COMMANDS = {"table": cmd_table, "weights": cmd_weights, "verify": cmd_verify,
            "zeros": cmd_zeros, "limits": cmd_limits}


def _glue_negative_values(argv: List[str]) -> List[str]:
    """Let ``--params -8,10,2,3/2`` through: argparse would read ``-8,...`` as a flag."""
    out: List[str] = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        nxt = argv[i + 1] if i + 1 < len(argv) else None
        if tok in ("--params", "--t", "--q-seq") and nxt is not None and nxt.startswith("-") \
                and nxt[1:2].isdigit():
            out.append(f"{tok}={nxt}")
            i += 2
            continue
        out.append(tok)
        i += 1
    return out


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(_glue_negative_values(list(sys.argv[1:] if argv is None else argv)))
    try:
        return COMMANDS[args.command](args)
    except (UsageError, ParameterError, BackendError) as exc:
        print(f"xracah {args.command}: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
