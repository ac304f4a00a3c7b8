"""Deterministic delimited output: 12-digit decimals, CSV, and JSON lines.

Every decimal printed anywhere in the delimited output goes through
``format_decimal``: round to 12 significant digits with banker's rounding
(ROUND_HALF_EVEN), padded to a fixed number of significant digits so columns
are diffable byte-for-byte.  Exact rationals are rounded directly from their
numerator/denominator pair (one correctly rounded decimal division), never
through a binary float.

JSON output is one object per line, rendered by a small serializer of our
own so that:

* decimals appear as JSON numbers carrying exactly the 12-digit rounding
  used in the CSV path, and
* integers of magnitude >= 2**53 are emitted as decimal strings, so
  consumers that parse JSON numbers into 64-bit floats cannot silently
  corrupt them.
"""

from __future__ import annotations

import csv
import io
import json
import math
from decimal import Context, Decimal, ROUND_HALF_EVEN
from fractions import Fraction

SIGNIFICANT_DIGITS = 12
BIG_INT_BOUND = 2**53  # JSON ints at or above this magnitude become strings

#: Column order for the local-intersection convergence table.
LOCAL_COLUMNS = ["n", "value", "ratio_num", "ratio_den", "k", "abs_error"]

#: Column order for the fiber-model prediction table.
FIBER_COLUMNS = ["n", "k", "r", "gcd", "mainTerm", "envelope", "ratio"]

#: Extra columns appended in joined (prediction vs exact) fiber mode.
FIBER_JOINED_COLUMNS = FIBER_COLUMNS + ["slack", "exact", "in_envelope"]

#: Column order for the global torsion-sum report.
GLOBAL_COLUMNS = [
    "n",
    "Sn",
    "target",
    "absError",
    "resDecimalDigits",
    "factorization",
    "cofactor",
]

#: Column order for the invariant-measure average report (single row).
MAHLER_COLUMNS = ["value", "refineDelta", "grid", "samplesUsed", "excluded", "seed"]

#: Column order for the per-prime reduction table of curve-info.
CURVE_INFO_COLUMNS = [
    "p",
    "v_delta",
    "kind",
    "k",
    "roots_rational",
    "hypotheses_ok",
    "warning",
]


def format_decimal(value, digits: int = SIGNIFICANT_DIGITS) -> str:
    """`value` rounded to `digits` significant figures, ROUND_HALF_EVEN.

    Accepts int, float, and Fraction.  The result always shows exactly
    `digits` significant figures (except for zero, printed as "0"), using
    Decimal's positional/scientific display rules, so equal inputs render
    to equal bytes.
    """
    if digits < 1:
        raise ValueError("digits must be >= 1")
    ctx = Context(prec=digits, rounding=ROUND_HALF_EVEN)
    if isinstance(value, bool):
        raise TypeError("booleans are not decimal values")
    if isinstance(value, Fraction):
        d = ctx.divide(Decimal(value.numerator), Decimal(value.denominator))
    elif isinstance(value, int):
        d = ctx.create_decimal(value)
    elif isinstance(value, float):
        if math.isnan(value) or math.isinf(value):
            raise ValueError("non-finite value in table output")
        # Decimal(float) is the exact binary value; one context rounding.
        d = ctx.create_decimal(Decimal(value))
    else:
        raise TypeError(f"cannot format {type(value).__name__} as a decimal")
    if d == 0:
        return "0"
    # Pad to exactly `digits` significant figures for stable column widths.
    target_exp = d.adjusted() - (digits - 1)
    pad_ctx = Context(prec=digits + 2, rounding=ROUND_HALF_EVEN)
    d = d.quantize(Decimal(1).scaleb(target_exp), context=pad_ctx)
    return str(d)


def _csv_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, (float, Fraction)):
        return format_decimal(value)
    if isinstance(value, str):
        return value
    if isinstance(value, (list, tuple)):
        # factorization cells: [[p, e], ...] -> "p^e p^e"
        return " ".join(f"{p}^{e}" for p, e in value)
    raise TypeError(f"cannot render {type(value).__name__} in CSV")


def csv_table(columns: list[str], rows: list[dict], comments: list[str] | None = None) -> str:
    """Render rows as CSV with a header, LF line endings, minimal quoting.

    `comments` (optional) are emitted first, one per line, prefixed "# ".
    Missing keys render as empty cells; extra keys are an error so column
    drift cannot pass silently.
    """
    for row in rows:
        extra = set(row) - set(columns)
        if extra:
            raise ValueError(f"row has columns not in the table: {sorted(extra)}")
    buf = io.StringIO()
    for line in comments or []:
        if "\n" in line or "\r" in line:
            raise ValueError("comment lines must be single-line")
        buf.write(f"# {line}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_csv_cell(row.get(col)) for col in columns])
    return buf.getvalue()


def _json_value(value) -> str:
    if value is None:
        return "null"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return json.dumps(str(value)) if abs(value) >= BIG_INT_BOUND else str(value)
    if isinstance(value, (float, Fraction)):
        return format_decimal(value)  # Decimal strings are valid JSON numbers
    if isinstance(value, str):
        return json.dumps(value)
    if isinstance(value, (list, tuple)):
        return "[" + ",".join(_json_value(v) for v in value) + "]"
    if isinstance(value, dict):
        return (
            "{"
            + ",".join(f"{json.dumps(k)}:{_json_value(v)}" for k, v in value.items())
            + "}"
        )
    raise TypeError(f"cannot render {type(value).__name__} in JSON")


def json_lines(rows: list[dict]) -> str:
    """One JSON object per line, keys in row order, LF line endings."""
    return "".join(_json_value(row) + "\n" for row in rows)


def render_table(
    columns: list[str],
    rows: list[dict],
    fmt: str,
    comments: list[str] | None = None,
    preamble_rows: list[dict] | None = None,
) -> str:
    """Render one logical table in the requested format.

    CSV: comments, then header + rows.  JSON: `preamble_rows` (summary
    objects that have no tabular shape), then one object per data row with
    the column subset in column order; comments are dropped because the
    JSON stream carries the same facts in `preamble_rows`.
    """
    if fmt == "csv":
        return csv_table(columns, rows, comments=comments)
    if fmt == "json":
        ordered = [
            {col: row.get(col) for col in columns} for row in rows
        ]
        return json_lines((preamble_rows or []) + ordered)
    raise ValueError(f"unknown output format: {fmt!r}")
