"""Command-line driver: list, verify, sweep, report.

Parameters are exact rational literals ("p/q" or Gaussian "p/q+r/s*i") even in
approx mode, so every run is reproducible bit for bit.  Exit codes: 0 all
pass, 1 verification failure, 2 configuration error, 3 numerical
non-convergence.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction

from . import __version__
from .errors import (
    ConstraintViolation,
    DomainError,
    DivergenceError,
    HypothesisViolation,
    NoConvergence,
    PoleError,
    PoleOnContour,
    SamplerExhausted,
    UnknownIdentity,
    ZeroArgument,
)
from . import identities, integrals, products
from .qkernel import parse_exact
from .reporting import ReportFile

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_CONFIG = 2
EXIT_NOCONV = 3

DEFAULT_SERIES_EPS = 1e-30
DEFAULT_INTEGRAL_EPS = 1e-25


def _parse_params(text: str) -> dict:
    """"q=1/2,sa=1/3" -> {"q": Fraction(1,2), ...}; Gaussian values stay exact."""
    out = {}
    if not text:
        return out
    for piece in text.split(","):
        if "=" not in piece:
            raise DomainError(f"parameter {piece!r} is not of the form name=value")
        name, _, value = piece.partition("=")
        scalar = parse_exact(value)
        out[name.strip()] = scalar if not scalar.is_real() else scalar.re
    return out


def _parse_n_range(text: str) -> list[int]:
    if ".." in text:
        lo, _, hi = text.partition("..")
        return list(range(int(lo), int(hi) + 1))
    return [int(text)]


def _echo_config(args: argparse.Namespace) -> dict:
    keep = (
        "command",
        "identity",
        "params",
        "n",
        "n_range",
        "mode",
        "precision_bits",
        "eps",
        "seed",
        "trials",
        "sigma",
        "f",
        "format",
    )
    return {k: getattr(args, k) for k in keep if getattr(args, k, None) is not None}


def _emit(report_file: ReportFile, args) -> None:
    text = report_file.to_csv() if args.format == "csv" else report_file.to_json()
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _identity_namespace(identity_id: str) -> str:
    if identity_id in products.PRODUCT_IDS:
        return "product"
    if identity_id in integrals.INTEGRAL_IDS:
        return "integral"
    if identity_id in products.CLASSICAL_IDS:
        return "classical"
    identities.lookup(identity_id)  # raises UnknownIdentity when absent
    return "terminating"


def cmd_list(args) -> int:
    print("terminating summations (exact unless marked approx):")
    for ident in identities.list_ids():
        rec = identities.lookup(ident)
        flag = " [approx]" if rec.approx_only else ""
        print(f"  {ident}{flag}  params({', '.join(rec.param_names)})  -- {rec.anchor}")
    print("product transformations and generating functions:")
    for ident in products.PRODUCT_IDS:
        print(f"  {ident}")
    print("classical limit targets:")
    for ident in products.CLASSICAL_IDS:
        print(f"  {ident}")
    print("integral representations:")
    for ident in integrals.INTEGRAL_IDS:
        print(f"  {ident}")
    return EXIT_OK


def cmd_verify(args) -> int:
    params = _parse_params(args.params or "")
    namespace = _identity_namespace(args.identity)
    rf = ReportFile(tool_version=__version__, config=_echo_config(args))

    if namespace == "terminating":
        rec = identities.lookup(args.identity)
        mode = args.mode or ("approx" if rec.approx_only else "exact")
        eps = args.eps if args.eps is not None else (0.0 if mode == "exact" else 1e-40)
        n_values = _parse_n_range(args.n_range) if args.n_range else [args.n]
        if n_values == [None]:
            raise DomainError("verify needs --n or --n-range for summation identities")
        for n in n_values:
            rf.add(
                identities.verify(
                    args.identity, params, n, mode=mode, eps=eps,
                    precision_bits=args.precision_bits,
                )
            )
    elif namespace == "product":
        eps = args.eps if args.eps is not None else DEFAULT_SERIES_EPS
        rf.add(
            products.verify_product(
                args.identity, params, eps=eps, precision_bits=args.precision_bits
            )
        )
    elif namespace == "classical":
        eps = args.eps if args.eps is not None else 1e-10
        rf.add(products.classical_limit_check(args.identity, params, eps=eps))
    else:
        eps = args.eps if args.eps is not None else DEFAULT_INTEGRAL_EPS
        if args.sigma is None or args.f is None:
            raise DomainError("integral representations need --sigma and --f")
        rf.add(
            integrals.verify_integral_rep(
                args.identity,
                params,
                sigma=Fraction(args.sigma),
                f=Fraction(args.f),
                eps=eps,
                precision_bits=args.precision_bits,
            )
        )
    _emit(rf, args)
    return EXIT_OK if rf.all_passed else EXIT_FAIL


def cmd_sweep(args) -> int:
    if _identity_namespace(args.identity) != "terminating":
        raise DomainError("sweep drives the terminating-summation registry only")
    n_values = _parse_n_range(args.n_range or "0..8")
    reports = identities.sweep(
        args.identity,
        trials=args.trials,
        seed=args.seed,
        n_range=n_values,
        eps=args.eps or 0.0,
        precision_bits=args.precision_bits,
    )
    rf = ReportFile(tool_version=__version__, config=_echo_config(args))
    for r in reports:
        rf.add(r)
    _emit(rf, args)
    return EXIT_OK if rf.all_passed else EXIT_FAIL


def cmd_report(args) -> int:
    with open(args.input, "r", encoding="utf-8") as fh:
        rf = ReportFile.from_json(fh.read())
    _emit(rf, args)
    return EXIT_OK if rf.all_passed else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qident",
        description="exact and certified-precision verification of q-series identities",
    )
    parser.add_argument("--version", action="version", version=f"qident {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_list = sub.add_parser("list", help="print every registered identity ID")
    p_list.set_defaults(func=cmd_list)

    def common(p):
        p.add_argument("identity", help="identity ID (see `qident list`)")
        p.add_argument("--params", help="comma-separated name=rational pairs")
        p.add_argument("--precision-bits", type=int, default=256, dest="precision_bits")
        p.add_argument("--eps", type=float, default=None)
        p.add_argument("--output", help="write the report to this path")
        p.add_argument("--format", choices=("json", "csv"), default="json")

    p_verify = sub.add_parser("verify", help="check one identity at one point")
    common(p_verify)
    p_verify.add_argument("--n", type=int, default=None)
    p_verify.add_argument("--n-range", dest="n_range", help="e.g. 0..8")
    p_verify.add_argument("--mode", choices=("exact", "approx"), default=None)
    p_verify.add_argument("--sigma", help="contour scale for integral representations")
    p_verify.add_argument("--f", help="theta parameter for integral representations")
    p_verify.set_defaults(func=cmd_verify)

    p_sweep = sub.add_parser("sweep", help="seeded random sweep over one identity")
    common(p_sweep)
    p_sweep.add_argument("--trials", type=int, default=25)
    p_sweep.add_argument("--seed", type=int, default=0)
    p_sweep.add_argument("--n-range", dest="n_range", default="0..8")
    p_sweep.set_defaults(func=cmd_sweep)

    p_report = sub.add_parser("report", help="re-render a stored JSON report")
    p_report.add_argument("input", help="path to a JSON report file")
    p_report.add_argument("--output")
    p_report.add_argument("--format", choices=("json", "csv"), default="csv")
    p_report.set_defaults(func=cmd_report)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    # uniform attribute defaults across subcommands
    for attr in ("mode", "sigma", "f", "n", "n_range", "params", "precision_bits",
                 "eps", "seed", "trials", "identity", "output", "format"):
        if not hasattr(args, attr):
            setattr(args, attr, None)
    try:
        return args.func(args)
    except (NoConvergence, PoleOnContour) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NOCONV
    except (
        UnknownIdentity,
        ConstraintViolation,
        DomainError,
        DivergenceError,
        HypothesisViolation,
        PoleError,
        SamplerExhausted,
        ZeroArgument,
        ValueError,
    ) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
