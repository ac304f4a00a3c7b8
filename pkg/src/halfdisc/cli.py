"""Command-line surface: every pipeline as a deterministic, scriptable command.

Subcommands
-----------
curve-info  reduction summary at the bad primes of a curve
local       exact local pairing convergence table at one odd prime
fiber-sim   fiber-model prediction table, optionally joined against exact values
global      torsion log-sum report against half the log-discriminant
mahler      invariant-measure average of log|P| over the torus

Exit codes: 0 success, 2 usage/input error, 3 numeric failure.  Output is
CSV by default, JSON-lines behind --format json; all runs are byte-identical
given the same flags (the HALFDISC_THREADS env var changes scheduling, never
bytes).  Tables are rendered in full before anything is written, so a
failing run never leaves a partial table behind.  --figures DIR additionally
renders matplotlib PNGs of the tabulated data (an opt-in extension of the
emit-data-only default).
"""

from __future__ import annotations

import argparse
import os
import sys
from fractions import Fraction

from . import tables
from .archimedean import NumericError, global_check, mahler_integral
from .curves import (
    MULTIPLICATIVE,
    Curve,
    parse_curve_json,
    reduction_type,
)
from .fiber import containment_row, predicted_intersection, prediction_rows
from .local import (
    DEFAULT_FULL_LIMIT,
    convergence_sequence,
    intersection_number,
    limit_report,
    records_as_rows,
)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_NUMERIC = 3


def _read_curve(arg: str) -> Curve:
    """Parse --curve: inline JSON, or @path to read the JSON from a file."""
    if arg.startswith("@"):
        path = arg[1:]
        try:
            with open(path, encoding="utf-8") as fh:
                arg = fh.read()
        except OSError as e:
            raise ValueError(f"cannot read curve file {path}: {e}") from None
    return parse_curve_json(arg)


def _parse_n_list(text: str) -> list[int]:
    try:
        values = [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise ValueError(f"invalid n list: {text!r}") from None
    if not values:
        raise ValueError("n list is empty")
    return values


def _none_or(value) -> str:
    return "none" if value is None else str(value).lower() if isinstance(value, bool) else str(value)


# ---------------------------------------------------------------------------
# subcommand handlers: each returns (text, figure_jobs)
# figure_jobs is a list of zero-argument callables run only under --figures


def cmd_curve_info(args) -> tuple[str, list]:
    curve = _read_curve(args.curve)
    bad = curve.bad_primes()
    rows = []
    for p in bad:
        red = reduction_type(curve, p)
        rows.append(
            {
                "p": red.p,
                "v_delta": red.v_delta,
                "kind": red.kind,
                "k": red.k,
                "roots_rational": red.roots_rational,
                "hypotheses_ok": red.hypotheses_ok,
                "warning": red.warning,
            }
        )
    summary = {
        "a": curve.a,
        "b": curve.b,
        "c": curve.c,
        "discP": curve.disc_p,
        "c4": curve.c4,
        "discE": curve.disc_e,
        "badPrimes": list(bad),
    }
    comments = [
        f"curve: y^2 = x^3 + ({curve.a}) x^2 + ({curve.b}) x + ({curve.c})",
        f"discP={curve.disc_p} c4={curve.c4} discE={curve.disc_e}",
        "badPrimes=" + (" ".join(str(p) for p in bad) if bad else "none"),
    ]
    text = tables.render_table(
        tables.CURVE_INFO_COLUMNS,
        rows,
        args.format,
        comments=comments,
        preamble_rows=[summary],
    )
    return text, []


def cmd_local(args) -> tuple[str, list]:
    curve = _read_curve(args.curve)
    if args.n_max < 2:
        ns: list[int] = []
    else:
        ns = [
            n
            for n in range(2, args.n_max + 1)
            if (n % 2 == 1 and n >= 3) or (args.even and n % 2 == 0)
        ]
    records = convergence_sequence(
        curve,
        args.p,
        ns,
        full_limit=max(DEFAULT_FULL_LIMIT, args.n_max),
    )
    rows = records_as_rows(records)
    if len(records) >= 3:
        report = limit_report(records)
        limit_summary = {
            "limit": {
                "p": report.p,
                "k": report.k,
                "C": report.c_constant,
                "passed": report.passed,
                "skipped": list(report.skipped),
            }
        }
        comments = [
            "limit: p={} k={} C={} passed={} skipped={}".format(
                report.p,
                _none_or(report.k),
                _none_or(report.c_constant),
                _none_or(report.passed),
                ",".join(map(str, report.skipped)) or "none",
            )
        ]
    else:
        limit_summary = {"limit": None}
        comments = ["limit: not computed (fewer than 3 rows)"]
    text = tables.render_table(
        tables.LOCAL_COLUMNS,
        rows,
        args.format,
        comments=comments,
        preamble_rows=[limit_summary],
    )
    jobs = []
    if args.figures and rows:
        from . import figures

        path = os.path.join(args.figures, figures.LOCAL_FIGURE)
        jobs.append(lambda: figures.convergence_figure(rows, path))
    return text, jobs


def cmd_fiber_sim(args) -> tuple[str, list]:
    joined = args.curve is not None or args.p is not None
    if joined and (args.curve is None or args.p is None):
        raise ValueError("joined mode needs both --curve and --p")
    if args.n_max < 3:
        ns: list[int] = []
    else:
        ns = list(range(3, args.n_max + 1, 2))
    if joined:
        curve = _read_curve(args.curve)
        red = reduction_type(curve, args.p)
        if red.kind != MULTIPLICATIVE:
            raise ValueError(
                f"fiber model needs multiplicative reduction at p={args.p}; "
                f"found {red.kind}"
            )
        k = red.k
        if args.k is not None and args.k != k:
            raise ValueError(
                f"--k {args.k} contradicts the curve (k={k} at p={args.p})"
            )
        full_limit = max(DEFAULT_FULL_LIMIT, args.n_max)
        rows = []
        for n in ns:
            exact = intersection_number(curve, args.p, n, full_limit)
            cell = containment_row(n, k, exact)
            cell["ratio"] = Fraction(cell["mainTerm"], n * n)
            rows.append({col: cell[col] for col in tables.FIBER_JOINED_COLUMNS})
        columns = tables.FIBER_JOINED_COLUMNS
    else:
        if args.k is None:
            raise ValueError("--k is required when no curve is supplied")
        rows = prediction_rows(args.k, ns)
        columns = tables.FIBER_COLUMNS
    text = tables.render_table(columns, rows, args.format)
    jobs = []
    if args.figures and rows:
        from . import figures

        path = os.path.join(args.figures, figures.FIBER_FIGURE)
        fig_rows = list(rows)
        jobs.append(lambda: figures.envelope_figure(fig_rows, path))
    return text, jobs


def cmd_global(args) -> tuple[str, list]:
    curve = _read_curve(args.curve)
    ns = _parse_n_list(args.n_list)
    report = global_check(curve, ns)
    rows = [r.as_row() for r in report.rows]
    comments = [f"target={tables.format_decimal(report.target)}"]
    preamble = [{"target": report.target, "warnings": list(report.warnings)}]
    comments += [f"warning: {w}" for w in report.warnings]
    text = tables.render_table(
        tables.GLOBAL_COLUMNS,
        rows,
        args.format,
        comments=comments,
        preamble_rows=preamble,
    )
    jobs = []
    if args.figures and rows:
        from . import figures

        path = os.path.join(args.figures, figures.GLOBAL_FIGURE)
        jobs.append(
            lambda: figures.torsion_sum_figure(rows, report.target, path)
        )
    return text, jobs


def cmd_mahler(args) -> tuple[str, list]:
    curve = _read_curve(args.curve)
    result = mahler_integral(curve, args.samples, seed=args.seed)
    row = {
        "value": result.value,
        "refineDelta": result.refine_delta,
        "grid": result.grid,
        "samplesUsed": result.samples_used,
        "excluded": result.excluded,
        "seed": result.seed,
    }
    text = tables.render_table(tables.MAHLER_COLUMNS, [row], args.format)
    return text, []


# ---------------------------------------------------------------------------
# parser


def _add_common(sub, curve_required=True, figures=True):
    if curve_required:
        sub.add_argument(
            "--curve",
            required=True,
            help='curve JSON {"a":..,"b":..,"c":..} or @file',
        )
    sub.add_argument(
        "--format",
        choices=("csv", "json"),
        default="csv",
        help="output format (default csv; json emits one object per line)",
    )
    sub.add_argument("--out", help="write the table to this file instead of stdout")
    if figures:
        sub.add_argument(
            "--figures",
            metavar="DIR",
            help="also render PNG figures of the tabulated data into DIR",
        )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="halfdisc",
        description=(
            "Exact local intersection numbers of torsion divisors on "
            "semistable cubic curves, their fiber-model predictions, and "
            "the archimedean torsion sums completing the discriminant."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_info = sub.add_parser(
        "curve-info", help="reduction summary at the bad primes"
    )
    _add_common(p_info, figures=False)
    p_info.set_defaults(handler=cmd_curve_info)

    p_local = sub.add_parser(
        "local", help="exact pairing convergence table at one odd prime"
    )
    _add_common(p_local)
    p_local.add_argument("--p", type=int, required=True, help="odd prime")
    p_local.add_argument(
        "--n-max", type=int, required=True, help="largest torsion order n"
    )
    p_local.add_argument(
        "--even",
        action="store_true",
        help="include even n (default: odd n >= 3 only)",
    )
    p_local.set_defaults(handler=cmd_local)

    p_fiber = sub.add_parser(
        "fiber-sim", help="fiber-model prediction table (odd n)"
    )
    p_fiber.add_argument(
        "--k", type=int, help="cycle parameter (derived from the curve in joined mode)"
    )
    p_fiber.add_argument(
        "--n-max", type=int, required=True, help="largest torsion order n"
    )
    p_fiber.add_argument(
        "--curve", help="optional curve JSON or @file (with --p: joined mode)"
    )
    p_fiber.add_argument(
        "--p", type=int, help="optional odd prime (with --curve: joined mode)"
    )
    p_fiber.add_argument(
        "--format", choices=("csv", "json"), default="csv",
        help="output format (default csv)",
    )
    p_fiber.add_argument("--out", help="write the table to this file")
    p_fiber.add_argument(
        "--figures", metavar="DIR", help="also render PNG figures into DIR"
    )
    p_fiber.set_defaults(handler=cmd_fiber_sim)

    p_global = sub.add_parser(
        "global", help="torsion log-sum report vs half log|disc|"
    )
    _add_common(p_global)
    p_global.add_argument(
        "--n-list",
        required=True,
        help="comma-separated odd torsion orders, e.g. 3,11,31",
    )
    p_global.set_defaults(handler=cmd_global)

    p_mahler = sub.add_parser(
        "mahler", help="invariant-measure average of log|P| over the torus"
    )
    _add_common(p_mahler, figures=False)
    p_mahler.add_argument(
        "--samples",
        type=int,
        default=1_000_000,
        help="sample budget (>= 10000; default 1000000)",
    )
    p_mahler.add_argument(
        "--seed", type=int, default=0, help="grid-offset seed (echoed in output)"
    )
    p_mahler.set_defaults(handler=cmd_mahler)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:  # argparse already printed the message
        return int(e.code or 0)
    try:
        text, figure_jobs = args.handler(args)
        if getattr(args, "figures", None):
            for job in figure_jobs:
                job()
    except (ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (NumericError, ArithmeticError) as e:
        print(f"numeric failure: {e}", file=sys.stderr)
        return EXIT_NUMERIC
    if args.out:
        try:
            with open(args.out, "w", encoding="utf-8") as fh:
                fh.write(text)
        except OSError as e:
            print(f"error: cannot write {args.out}: {e}", file=sys.stderr)
            return EXIT_USAGE
    else:
        sys.stdout.write(text)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
