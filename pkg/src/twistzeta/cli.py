"""Command-line interface.

Exit codes: 0 ran to completion (whatever the verdicts), 2 configuration or
usage error, 3 internal contradiction.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import __version__
from . import matrices as mx
from .config import load_config
from .errors import ConfigError, InsufficientExtensionError, PreconditionError, ReconstructionError
from .exact_arith import format_rational
from .models import (
    abelian_fixed_count,
    elliptic_point_count_bruteforce,
    frobenius_companion,
    single_twist_trace,
    torus_fixed_count_bruteforce,
    torus_fixed_count_formula,
)
from .positivity import bell_polynomials
from .report import DEFAULT_TOL, canonical_json, csv_rows, run_pipeline, scan_iterates
from .zeta import n0_estimate

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_CONTRADICTION = 3

DEFAULT_FIELD_BUDGET = 10**5  # default enumeration stays within fields of this size


class Contradiction(Exception):
    pass


def _tolerance(text: str) -> Fraction:
    try:
        tol = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if tol <= 0:
        raise argparse.ArgumentTypeError("tolerance must be positive")
    return tol


def _positive_int(text: str) -> int:
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if n < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return n


def _write(path, text: str):
    if path is None:
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8")


def cmd_zeta(args) -> int:
    cfg = load_config(args.model)
    if args.terms is not None:
        cfg = cfg.with_terms(args.terms)
    report = run_pipeline(cfg, args.tol)
    _write(args.out, report.to_json())
    if args.csv:
        with open(args.csv, "w", newline="", encoding="utf-8") as fh:
            csv.writer(fh, lineterminator="\n").writerows(csv_rows(report))
    if report.contradictions:
        raise Contradiction("; ".join(report.contradictions))
    return EXIT_OK


def _interval_text(i) -> str:
    return f"[{float(Fraction(i['lo'])):.12g}, {float(Fraction(i['hi'])):.12g}]"


def cmd_verify(args) -> int:
    cfg = load_config(args.model)
    reports = scan_iterates(cfg, args.iterate, args.tol)
    problems = []
    for r, rep in enumerate(reports, start=1):
        s = rep.spectral
        print(
            f"r={r} ineq1={s['ineq1']} ineq2={s['ineq2']} "
            f"lambda_even={_interval_text(s['lambda_even'])} "
            f"lambda_odd={_interval_text(s['lambda_odd'])} "
            f"k_even={s['k_even']} k_odd={s['k_odd']} "
            f"log_zeta_nonneg={rep.positivity['log_zeta_nonneg']} "
            f"disc={rep.disc_lemma['verdict']} "
            f"zeta_routes_agree={str(rep.zeta['agreement']).lower()} "
            f"n0={rep.n0['value'] if rep.n0['value'] is not None else rep.n0['status']}"
        )
        problems.extend(f"r={r}: {c}" for c in rep.contradictions)
    if args.out:
        Path(args.out).write_text(
            canonical_json([rep.to_dict() for rep in reports]) + "\n", encoding="utf-8"
        )
    if problems:
        raise Contradiction("; ".join(problems))
    print("no contradictions")
    return EXIT_OK


def cmd_oracle(args) -> int:
    cfg = load_config(args.model)
    model = cfg.model()
    if model is None:
        raise ConfigError(f"kind {cfg.kind!r} has no fixed-point oracle")
    action = cfg.graded_action()
    ext_bound = args.ext_bound
    if ext_bound is None:
        ext_bound = 1
        while cfg.q ** (ext_bound + 1) <= DEFAULT_FIELD_BUDGET:
            ext_bound += 1
    mismatches = []
    for m in range(1, args.max_twist + 1):
        trace = single_twist_trace(action, m)
        row = {"twist": m, "alternating_trace": format_rational(trace)}
        if cfg.kind == "torus":
            formula = torus_fixed_count_formula(model, m)
            row["fixed_formula"] = formula
            try:
                brute = torus_fixed_count_bruteforce(model, m, ext_bound)
            except (InsufficientExtensionError, PreconditionError) as exc:
                row["fixed_bruteforce"] = f"skipped: {exc}"
            else:
                row["fixed_bruteforce"] = brute
                if brute != formula:
                    mismatches.append(f"twist {m}: formula {formula} != enumeration {brute}")
        else:
            row["fixed_formula"] = abelian_fixed_count(model, m)
            if cfg.curve is not None:
                a4, a6 = cfg.curve
                companion = mx.matpow(frobenius_companion(model.frob_trace, model.q), m)
                predicted = model.q**m + 1 - mx.trace(companion)
                row["curve_points_formula"] = predicted
                try:
                    counted = elliptic_point_count_bruteforce(model.q, a4, a6, m)
                except PreconditionError as exc:
                    row["curve_points_bruteforce"] = f"skipped: {exc}"
                else:
                    row["curve_points_bruteforce"] = counted
                    if counted != predicted:
                        mismatches.append(f"twist {m}: #E {counted} != trace formula {predicted}")
        print(canonical_json(row))
    n0 = n0_estimate(model, args.max_twist)
    print(canonical_json({"n0": n0 if n0 is not None else "not-found"}))
    if mismatches:
        raise Contradiction("; ".join(mismatches))
    return EXIT_OK


def cmd_bell(args) -> int:
    try:
        polys = bell_polynomials(args.n)
    except PreconditionError as exc:
        raise ConfigError(str(exc)) from None
    for p in polys:
        print(f"P_{p.n} = {p!r}")
        print(f"  P_{p.n}(1,...,1) = {p.coefficient_sum()}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="twistzeta", description="Twisted zeta functions of models over finite fields."
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("zeta", help="run the pipeline and write the canonical JSON report")
    p.add_argument("--model", required=True, help="config file, or the name of a bundled config")
    p.add_argument("--terms", type=_positive_int, help="series truncation order")
    p.add_argument("--out", help="report path (default: stdout)")
    p.add_argument("--csv", help="write (n, trace_n, |coeff_n(Z)|) rows here")
    p.add_argument("--tol", type=_tolerance, default=DEFAULT_TOL, help="bracket width, e.g. 1e-9 or 1/1000")
    p.set_defaults(func=cmd_zeta)

    p = sub.add_parser("verify", help="verdicts for f, f^2, ..., f^R")
    p.add_argument("--model", required=True, help="config file, or the name of a bundled config")
    p.add_argument("--iterate", type=_positive_int, default=1, metavar="R", help="largest iterate to check")
    p.add_argument("--tol", type=_tolerance, default=DEFAULT_TOL, help="bracket width, e.g. 1e-9 or 1/1000")
    p.add_argument("--out", help="also write the reports as a JSON array")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("oracle", help="compare traces with independent fixed-point counts")
    p.add_argument("--model", required=True, help="config file, or the name of a bundled config")
    p.add_argument("--max-twist", type=_positive_int, required=True, metavar="M", help="check twists n = 1..M")
    p.add_argument("--ext-bound", type=_positive_int, default=None,
                   help="largest extension degree s of F_q to enumerate for tori "
                        f"(default: largest with q^s <= {DEFAULT_FIELD_BUDGET})")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("bell", help="print the Bell polynomials P_1..P_K")
    p.add_argument("--n", type=int, required=True, metavar="K", help="highest index, at most 12")
    p.set_defaults(func=cmd_bell)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, PreconditionError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ReconstructionError as exc:
        print(f"contradiction: zeta series is not rational within the degree bounds: {exc}",
              file=sys.stderr)
        return EXIT_CONTRADICTION
    except Contradiction as exc:
        print(f"contradiction: {exc}", file=sys.stderr)
        return EXIT_CONTRADICTION


if __name__ == "__main__":
    sys.exit(main())
