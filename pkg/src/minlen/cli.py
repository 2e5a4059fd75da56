"""Command-line interface.

Exit codes: 0 success, 1 usage error, 2 numerical or I/O failure.
"""
from __future__ import annotations

import argparse
import shlex
import sys

from . import __version__
from .deformations import DEFORMATIONS
from .errors import DomainError, MinlenError, NumericError, UnknownDeformation
from .report import (METHODS, compare_deformations, emit_compare_csv, emit_csv, kernel_check,
                     run_spectrum, sweep_alpha)

EXIT_OK, EXIT_USAGE, EXIT_FAILURE = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: error: {message}")


def _positive_float(text):
    v = float(text)
    if not v > 0:
        raise argparse.ArgumentTypeError(f"must be positive, got {text}")
    return v


def _positive_int(text):
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be a positive integer, got {text}")
    return v


def _add_common(p, *, grid: bool):
    p.add_argument("--deformation", default="cutoff", choices=DEFORMATIONS)
    if grid:
        p.add_argument("--alpha0-min", type=_positive_float, required=True)
        p.add_argument("--alpha0-max", type=_positive_float, required=True)
        p.add_argument("--points", type=_positive_int, required=True)
        p.add_argument("--log-grid", action="store_true", help="log-spaced coupling grid")
        p.add_argument("--jobs", type=_positive_int, default=1, help="worker processes")
    else:
        p.add_argument("--alpha0", type=_positive_float, required=True)
    p.add_argument("--levels", type=_positive_int, default=1)
    p.add_argument("--method", default="shooting", choices=METHODS)
    p.add_argument("--tol", type=_positive_float, default=1e-12, help="root tolerance on ln(eps)")
    p.add_argument("--nystrom-nodes", type=int, default=800)
    p.add_argument("--delta", type=float, default=0.0, help="WKB constant in [0, 1)")
    p.add_argument("--out", default="-", help="output path, '-' for stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="minlen", description="Bound states of -alpha/X^2 with a minimal length.")
    parser.add_argument("--version", action="version", version=f"minlen {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    _add_common(sub.add_parser("spectrum", help="levels for a single coupling"), grid=False)
    _add_common(sub.add_parser("sweep", help="levels over a coupling grid"), grid=True)

    cmp_ = sub.add_parser("compare", help="ground-state spread across deformations")
    cmp_.add_argument("--deformation", action="append", choices=DEFORMATIONS,
                      help="repeatable; default: all registry deformations")
    cmp_.add_argument("--alpha0-min", type=_positive_float, default=0.25)
    cmp_.add_argument("--alpha0-max", type=_positive_float, default=5.0)
    cmp_.add_argument("--points", type=_positive_int, default=20)
    cmp_.add_argument("--log-grid", action="store_true", default=True)
    cmp_.add_argument("--linear-grid", dest="log_grid", action="store_false")
    cmp_.add_argument("--tol", type=_positive_float, default=1e-12)
    cmp_.add_argument("--out", default="-")

    kc = sub.add_parser("kernel-check", help="self-checks of the inverse-square kernel")
    kc.add_argument("--terms", type=_positive_int, default=10_000)
    kc.add_argument("--grid", type=int, default=101)
    kc.add_argument("--b", type=_positive_float, default=1.0)
    kc.add_argument("--tol", type=_positive_float, default=1e-3)
    return parser


def _open_out(path):
    if path == "-":
        return sys.stdout, False
    return open(path, "w", encoding="utf-8", newline=""), True


def _provenance(argv):
    return f"minlen {__version__}: minlen {shlex.join(argv)}"


def _run(args, argv) -> int:
    if args.command == "kernel-check":
        report = kernel_check(args.terms, args.grid, args.b, args.tol)
        for line in report.lines():
            print(line)
        if not report.passed:
            p, q = report.spectral_worst
            print(f"kernel-check failed; worst spectral offender p={p!r} q={q!r}", file=sys.stderr)
            return EXIT_FAILURE
        return EXIT_OK

    if args.command == "compare":
        names = args.deformation or list(DEFORMATIONS)
        summary = compare_deformations(names, args.alpha0_min, args.alpha0_max, args.points,
                                       log_grid=args.log_grid, tol=args.tol)
        fh, close = _open_out(args.out)
        try:
            emit_compare_csv(summary, fh, _provenance(argv))
        finally:
            if close:
                fh.close()
        print(f"max relative spread: {summary.max_spread:.6g}", file=sys.stderr)
        print(f"ordering violations: {len(summary.violations)}", file=sys.stderr)
        for a, lo, hi in summary.violations:
            print(f"  alpha0={a!r}: eps({lo}) < eps({hi})", file=sys.stderr)
        return EXIT_OK

    opts = dict(tol=args.tol, nystrom_nodes=args.nystrom_nodes, delta=args.delta)
    if args.command == "spectrum":
        result = run_spectrum(args.deformation, args.alpha0, args.levels, args.method, **opts)
        table, notes = result.table, ([result.status] if result.truncated else [])
    else:
        table = sweep_alpha(args.deformation, args.alpha0_min, args.alpha0_max, args.points,
                            log_grid=args.log_grid, levels=args.levels, method=args.method,
                            jobs=args.jobs, **opts)
        notes = table.notes
    fh, close = _open_out(args.out)
    try:
        emit_csv(table, fh, _provenance(argv))
    finally:
        if close:
            fh.close()
    for note in notes:
        print(f"note: {note}", file=sys.stderr)
    return EXIT_OK


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return _run(args, argv)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except (DomainError, UnknownDeformation) as exc:
        print(f"minlen: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (NumericError, OSError, MinlenError) as exc:
        print(f"minlen: failure: {exc}", file=sys.stderr)
        return EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())
