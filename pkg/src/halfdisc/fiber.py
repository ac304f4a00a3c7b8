"""Combinatorial model of the cycle fiber and its intersection prediction.

At a place of multiplicative reduction with v(disc) = 2k, the minimal model's
special fiber is a cycle of 2k lines; after the degree-n base change the
cycle has 2kn components, and the n-torsion sections land on the components
whose cycle index is a multiple of 2k, each with multiplicity n.  Resolving
the pullback of the 2-torsion divisor produces exceptional multiplicities
2, 4, ..., 2k, and summing the torsion hits against that ledger yields the
prediction

    mainTerm = (n - r) n k,   r = n mod 2k,

with an error envelope k(k-1) * 2n in the gcd(n, 2k) = 1 case and
k(k-1) * 2k otherwise.  Everything here is a model prediction: exact ground
truth lives in the resultant-valuation path, and the two are compared, never
conflated.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd

SLACK_PER_CELL = 2  # containment slack is envelope + SLACK_PER_CELL * k * n


@dataclass(frozen=True)
class MultiplicityLedger:
    """Exceptional-divisor multiplicities of the resolved 2-torsion pullback."""

    k: int
    m: tuple[int, ...]

    def total(self) -> int:
        """sum 2j for j = 1..k, the bookkeeping weight k(k+1)."""
        return sum(self.m)


@dataclass(frozen=True)
class FiberCycle:
    """The 2kn-component cycle after base change, with torsion marks."""

    k: int
    n: int
    component_count: int
    marked_components: frozenset[int]
    mark_multiplicity: int

    def total_mark_multiplicity(self) -> int:
        return len(self.marked_components) * self.mark_multiplicity


@dataclass(frozen=True)
class FiberPrediction:
    """Model prediction for the pairing at one (n, k) cell."""

    n: int
    k: int
    r: int
    gcd_m: int
    main_term: int
    envelope: int
    ratio: Fraction = field(compare=False)

    def __post_init__(self):
        if not (0 <= self.r < 2 * self.k):
            raise ValueError("r must satisfy 0 <= r < 2k")
        if self.envelope < 0:
            raise ValueError("envelope must be nonnegative")


def multiplicity_ledger(k: int) -> MultiplicityLedger:
    """The ledger [2, 4, ..., 2k]; each step adds 2."""
    if k < 1:
        raise ValueError("k must be >= 1")
    return MultiplicityLedger(k=k, m=tuple(2 * j for j in range(1, k + 1)))


def component_count(j: int, n: int, k: int) -> int:
    """|{m in Z : (j-1)n <= 2km <= jn}| with closed interval endpoints.

    Endpoints where 2km equals a multiple of n are counted in both adjacent
    j-cells; the model's +-1 slack absorbs that double count.  Requires
    1 <= j <= k-1 (the extremal cells j = 0, k are handled separately in the
    aggregated formula).
    """
    if not 1 <= j <= k - 1:
        raise ValueError("j must lie in 1..k-1")
    if n < 1:
        raise ValueError("n must be positive")
    lo = (j - 1) * n
    hi = j * n
    m_lo = -((-lo) // (2 * k))  # ceil(lo / 2k)
    m_hi = hi // (2 * k)  # floor(hi / 2k)
    return max(0, m_hi - m_lo + 1)


def predicted_intersection(n: int, k: int) -> FiberPrediction:
    """Main term (n - r) n k and envelope for odd n, cycle parameter k."""
    if n % 2 == 0 or n < 1:
        raise ValueError("n must be odd and positive")
    if k < 1:
        raise ValueError("k must be >= 1")
    r = n % (2 * k)
    g = gcd(n, 2 * k)
    main = (n - r) * n * k
    envelope = k * (k - 1) * (2 * n if g == 1 else 2 * k)
    return FiberPrediction(
        n=n,
        k=k,
        r=r,
        gcd_m=g,
        main_term=main,
        envelope=envelope,
        ratio=Fraction(main, n * n),
    )


def fiber_cycle(n: int, k: int) -> FiberCycle:
    """Cycle of 2kn components with n marks at the multiples of 2k."""
    if n < 1 or k < 1:
        raise ValueError("n and k must be >= 1")
    total = 2 * k * n
    marks = frozenset(range(0, total, 2 * k))
    return FiberCycle(
        k=k,
        n=n,
        component_count=total,
        marked_components=marks,
        mark_multiplicity=n,
    )


def containment_row(n: int, k: int, exact_value: int) -> dict:
    """Join one exact cell against the prediction with slack envelope + 2kn.

    The in/out verdict is reported per cell; only the asymptotic ratio
    statement is a binding contract elsewhere, so an out-of-envelope cell is
    data, not an exception.
    """
    pred = predicted_intersection(n, k)
    slack = pred.envelope + SLACK_PER_CELL * k * n
    lo, hi = pred.main_term - slack, pred.main_term + slack
    return {
        "n": n,
        "k": k,
        "r": pred.r,
        "gcd": pred.gcd_m,
        "mainTerm": pred.main_term,
        "envelope": pred.envelope,
        "slack": slack,
        "exact": exact_value,
        "in_envelope": lo <= exact_value <= hi,
    }


def prediction_rows(k: int, n_values: list[int]) -> list[dict]:
    """Table rows (n, k, r, gcd, mainTerm, envelope, ratio) for export."""
    out = []
    for n in n_values:
        pred = predicted_intersection(n, k)
        out.append(
            {
                "n": n,
                "k": k,
                "r": pred.r,
                "gcd": pred.gcd_m,
                "mainTerm": pred.main_term,
                "envelope": pred.envelope,
                "ratio": pred.ratio,
            }
        )
    return out
