"""Local intersection numbers on the projective line over Z_(p).

The two horizontal divisors are D (zero scheme of the monic cubic P, the
nontrivial 2-torsion x-coordinates) and H_n (closure of the n-torsion
x-coordinates away from 2-torsion, cut out by the primitive polynomial h_n).
Their intersection number above an odd prime p is

    (D.H_n)_p = v_p(Res(P, h_n)).

Because P is monic, D stays away from the section at infinity, so this
valuation already counts every intersection on the projective line, including
branches of H_n that reduce to infinity.

Fast path (odd n): Res(P, psi_n) equals the degree-3 norm of psi_n in
Z[x]/(P), computed without materializing psi_n, and the content of psi_n
(supported on primes dividing n) is divided out as 3 * v_p(content).
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

from .curves import Curve, reduction_type
from .exact import is_prime, resultant, valuation
from .torsion import (
    DEFAULT_FULL_LIMIT,
    psi_content_valuation,
    psi_mod_cubic,
    torsion_x_polynomial,
)

THREADS_ENV = "HALFDISC_THREADS"


@dataclass(frozen=True)
class IntersectionRecord:
    """One convergence cell: the exact pairing at (p, n) and its n^2-ratio."""

    p: int
    n: int
    value: int
    ratio: Fraction
    k_target: int | None

    def __post_init__(self):
        if self.value < 0:
            raise ValueError("intersection number cannot be negative")
        if self.ratio != Fraction(self.value, self.n * self.n):
            raise ValueError("ratio must equal value / n^2")


def _check_prime(p: int) -> None:
    if p == 2:
        raise ValueError("residual characteristic 2 is excluded")
    if not is_prime(p):
        raise ValueError(f"{p} is not an odd prime")


def intersection_number(
    curve: Curve, p: int, n: int, full_limit: int = DEFAULT_FULL_LIMIT
) -> int:
    """(D.H_n)_p = v_p(Res(P, h_n)) for n >= 2 at an odd prime p.

    Odd n never materializes h_n: the resultant is the quotient-ring norm of
    psi_n mod P minus the content correction 3 * v_p(content(psi_n)).  Even n
    goes through the materialized primitive polynomial (capped by
    full_limit).  n = 2 is trivially 0 (H_2 is empty).
    """
    _check_prime(p)
    if n < 2:
        raise ValueError("intersection numbers need n >= 2")
    if n == 2:
        return 0
    if n % 2:
        nrm = psi_mod_cubic(curve, n).norm()
        if nrm == 0:
            raise ArithmeticError(
                "divisors share a component: Res(P, psi_n) = 0"
            )
        return valuation(nrm, p) - 3 * psi_content_valuation(curve, n, p)
    h = torsion_x_polynomial(curve, n, full_limit=full_limit).h
    res = resultant(curve.poly(), h)
    if res == 0:
        raise ArithmeticError("divisors share a component: Res(P, h_n) = 0")
    return valuation(res, p)


def intersection_number_via_resultant(
    curve: Curve, p: int, n: int, full_limit: int = DEFAULT_FULL_LIMIT
) -> int:
    """Slow independent route: materialize h_n and run the full subresultant
    algorithm.  Used to cross-check the quotient-ring fast path."""
    _check_prime(p)
    if n < 2:
        raise ValueError("intersection numbers need n >= 2")
    if n == 2:
        return 0
    h = torsion_x_polynomial(curve, n, full_limit=full_limit).h
    res = resultant(curve.poly(), h)
    if res == 0:
        raise ArithmeticError("divisors share a component: Res(P, h_n) = 0")
    return valuation(res, p)


def _thread_count(threads: int | None, cells: int) -> int:
    if threads is None:
        env = os.environ.get(THREADS_ENV)
        threads = int(env) if env else 1
    if threads < 1:
        raise ValueError("thread count must be >= 1")
    return min(threads, max(cells, 1))


def convergence_sequence(
    curve: Curve,
    p: int,
    n_list: list[int],
    threads: int | None = None,
    full_limit: int = DEFAULT_FULL_LIMIT,
) -> list[IntersectionRecord]:
    """One IntersectionRecord per n, ascending.

    Cells are independent pure computations; with threads > 1 they are
    evaluated concurrently and reassembled in n-order, so the output is
    bit-identical to the serial run.
    """
    _check_prime(p)
    ns = list(n_list)
    if any(n < 2 for n in ns):
        raise ValueError("all n must be >= 2")
    if ns != sorted(ns) or len(set(ns)) != len(ns):
        raise ValueError("n values must be strictly ascending")
    red = reduction_type(curve, p)
    workers = _thread_count(threads, len(ns))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            values = list(
                pool.map(lambda n: intersection_number(curve, p, n, full_limit), ns)
            )
    else:
        values = [intersection_number(curve, p, n, full_limit) for n in ns]
    return [
        IntersectionRecord(
            p=p, n=n, value=v, ratio=Fraction(v, n * n), k_target=red.k
        )
        for n, v in zip(ns, values)
    ]


@dataclass(frozen=True)
class LimitRow:
    """One limit-report row: the ratio against the target k with its bound."""

    n: int
    value: int
    ratio: Fraction
    abs_error: Fraction | None
    bound: Fraction | None
    counted: bool
    within: bool | None


@dataclass(frozen=True)
class LimitReport:
    """Convergence of value/n^2 toward the reduction-theoretic target k.

    The tolerance schedule is |ratio - k| <= C(k)/n with
    C(k) = 2k + 2k(k-1); rows are judged against it individually and
    `passed` aggregates the counted rows.  Cells at good reduction with
    p | n are reported but not counted (no limit is asserted for them),
    and additive reduction has no target at all (`passed` is None).
    """

    p: int
    k: int | None
    c_constant: int | None
    rows: tuple[LimitRow, ...]
    passed: bool | None
    skipped: tuple[int, ...]


def tolerance_constant(k: int) -> int:
    """C(k) = 2k + 2k(k-1): main-term deficit 2k plus envelope 2k(k-1)."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    return 2 * k + 2 * k * (k - 1)


def limit_report(records: list[IntersectionRecord]) -> LimitReport:
    """Judge a convergence sequence against its reduction-theoretic target."""
    if len(records) < 3:
        raise ValueError("limit report needs at least 3 records")
    ps = {r.p for r in records}
    if len(ps) > 1:
        raise ValueError("all records must share one prime")
    ks = {r.k_target for r in records}
    if len(ks) > 1:
        raise ValueError("all records must share one reduction target")
    p = records[0].p
    k = records[0].k_target
    ordered = sorted(records, key=lambda r: r.n)
    rows = []
    skipped = []
    if k is None:
        for r in ordered:
            rows.append(
                LimitRow(
                    n=r.n,
                    value=r.value,
                    ratio=r.ratio,
                    abs_error=None,
                    bound=None,
                    counted=False,
                    within=None,
                )
            )
        return LimitReport(
            p=p, k=None, c_constant=None, rows=tuple(rows), passed=None,
            skipped=(),
        )
    c = tolerance_constant(k)
    for r in ordered:
        counted = not (k == 0 and r.n % p == 0)
        err = abs(r.ratio - k)
        bound = Fraction(c, r.n)
        rows.append(
            LimitRow(
                n=r.n,
                value=r.value,
                ratio=r.ratio,
                abs_error=err,
                bound=bound,
                counted=counted,
                within=err <= bound,
            )
        )
        if not counted:
            skipped.append(r.n)
    counted_rows = [row for row in rows if row.counted]
    passed = all(row.within for row in counted_rows) if counted_rows else None
    return LimitReport(
        p=p,
        k=k,
        c_constant=c,
        rows=tuple(rows),
        passed=passed,
        skipped=tuple(skipped),
    )


def records_as_rows(records: list[IntersectionRecord]) -> list[dict]:
    """Table rows (n, value, ratio_num, ratio_den, k, abs_error) for export.

    abs_error is |ratio - k| as an exact Fraction, or None when the
    reduction is additive and no target exists.
    """
    out = []
    for r in sorted(records, key=lambda rec: rec.n):
        err = None if r.k_target is None else abs(r.ratio - r.k_target)
        out.append(
            {
                "n": r.n,
                "value": r.value,
                "ratio_num": r.ratio.numerator,
                "ratio_den": r.ratio.denominator,
                "k": r.k_target,
                "abs_error": err,
            }
        )
    return out
