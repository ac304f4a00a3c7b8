"""Integral curves y^2 = x^3 + a x^2 + b x + c and their local reduction data.

The cubic is kept monic and integral.  All reduction bookkeeping is done at
odd primes; residual characteristic 2 is outside the model and rejected
where it would matter.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Optional

from .exact import Poly, factorize, is_prime, resultant, valuation

GOOD = "good"
MULTIPLICATIVE = "multiplicative"
ADDITIVE = "additive"


@dataclass(frozen=True)
class Curve:
    a: int
    b: int
    c: int

    @property
    def disc_p(self) -> int:
        a, b, c = self.a, self.b, self.c
        return 18 * a * b * c - 4 * a**3 * c + a * a * b * b - 4 * b**3 - 27 * c * c

    @property
    def c4(self) -> int:
        return 16 * self.a * self.a - 48 * self.b

    @property
    def disc_e(self) -> int:
        return 16 * self.disc_p

    def poly(self) -> Poly:
        return Poly((self.c, self.b, self.a, 1))

    def translate(self, t: int) -> "Curve":
        """The curve for P(x + t); an isomorphism over Z[1/1]."""
        a, b, c = self.a, self.b, self.c
        return from_cubic(
            a + 3 * t,
            b + 2 * a * t + 3 * t * t,
            c + b * t + a * t * t + t**3,
        )

    def bad_primes(self) -> list[int]:
        """Odd primes dividing the cubic discriminant, ascending."""
        d = self.disc_p
        return [p for p in factorize(d) if p != 2]

    def __str__(self) -> str:
        return f"y^2 = x^3 + {self.a}x^2 + {self.b}x + {self.c}"


def from_cubic(a: int, b: int, c: int) -> Curve:
    """Build a curve, rejecting singular cubics (zero discriminant)."""
    for v in (a, b, c):
        if not isinstance(v, int):
            raise ValueError("cubic coefficients must be integers")
    curve = Curve(a, b, c)
    if curve.disc_p == 0:
        raise ValueError("singular cubic: discriminant is zero")
    # closed form must agree with the resultant route
    assert curve.disc_p == -resultant(curve.poly(), curve.poly().derivative())
    return curve


def parse_curve_json(text: str) -> Curve:
    """Parse {"a": ..., "b": ..., "c": ...}; decimal strings permitted."""
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as e:
        raise ValueError(f"invalid curve JSON: {e}") from None
    if not isinstance(obj, dict) or set(obj) != {"a", "b", "c"}:
        raise ValueError('curve JSON must be an object with keys "a", "b", "c"')
    vals = []
    for key in ("a", "b", "c"):
        v = obj[key]
        if isinstance(v, str):
            v = int(v)
        if not isinstance(v, int) or isinstance(v, bool):
            raise ValueError(f'curve coefficient "{key}" must be an integer')
        vals.append(v)
    return from_cubic(*vals)


def rational_roots(curve: Curve) -> tuple[bool, list[int]]:
    """Integer roots of the monic cubic, with multiplicity-aware deflation.

    A monic integral cubic splits over Q iff it has three integer roots, so
    (True, roots) is returned exactly in that case.
    """
    work = list(curve.poly().c)
    roots: list[int] = []
    while len(work) > 1 and work[0] == 0:
        roots.append(0)
        work = work[1:]
    while len(work) > 1:
        const = abs(work[0])
        divs = [1]
        for p, e in factorize(const).items():
            divs = [d * p**k for d in divs for k in range(e + 1)]
        for r in sorted(d * s for d in set(divs) for s in (1, -1)):
            val = 0
            for cv in reversed(work):
                val = val * r + cv
            if val == 0:
                # synthetic division by (x - r)
                q = [0] * (len(work) - 1)
                acc = 0
                for i in range(len(work) - 1, 0, -1):
                    acc = work[i] + acc * r
                    q[i - 1] = acc
                work = q
                roots.append(r)
                break
        else:
            break
        while len(work) > 1 and work[0] == 0:
            roots.append(0)
            work = work[1:]
    split = len(roots) == 3
    return split, sorted(roots)


@dataclass(frozen=True)
class LocalReduction:
    p: int
    v_delta: int
    kind: str
    k: Optional[int]
    roots_rational: bool
    hypotheses_ok: bool
    warning: Optional[str] = None

    def component_count(self) -> Optional[int]:
        """Components of the special fiber of the minimal model."""
        if self.kind == GOOD:
            return 1
        if self.kind == MULTIPLICATIVE:
            return 2 * self.k
        return None


def reduction_type(curve: Curve, p: int) -> LocalReduction:
    """Classify the fiber at an odd prime from v_p(disc) and v_p(c4).

    Multiplicative reduction requires a unit c4 and even v_p(disc) = 2k; an
    odd multiplicative valuation cannot arise from a rational 2-torsion
    configuration, so that case is classified additive with a warning.
    """
    if p == 2:
        raise ValueError("residual characteristic 2 is excluded")
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    d = curve.disc_e
    v = valuation(d, p)
    split, _roots = rational_roots(curve)
    warning = None
    c4_unit = curve.c4 != 0 and valuation(curve.c4, p) == 0
    if v == 0:
        kind, k = GOOD, 0
    elif c4_unit and v % 2 == 0:
        kind, k = MULTIPLICATIVE, v // 2
    elif c4_unit:
        kind, k = ADDITIVE, None
        warning = (
            f"v_{p}(disc) = {v} is odd with unit c4; outside the modeled "
            "semistable family, classified additive"
        )
    else:
        kind, k = ADDITIVE, None
    hyp = kind != ADDITIVE and split
    return LocalReduction(
        p=p,
        v_delta=v,
        kind=kind,
        k=k,
        roots_rational=split,
        hypotheses_ok=hyp,
        warning=warning,
    )


@dataclass(frozen=True)
class HypothesisReport:
    p: int
    n: int
    p_odd_prime: bool
    semistable_at_p: Optional[bool]
    v_delta_even: Optional[bool]
    roots_rational: bool
    n_odd: bool
    gcd_n_2k: Optional[int]

    @property
    def all_ok(self) -> bool:
        flags = [
            self.p_odd_prime,
            self.semistable_at_p,
            self.v_delta_even,
            self.roots_rational,
            self.n_odd,
        ]
        return all(f is True for f in flags if f is not None) and not any(
            f is False for f in flags
        )


def check_hypotheses(curve: Curve, p: int, n: int) -> HypothesisReport:
    """Report, never raise: which structural hypotheses hold at (p, n)."""
    p_odd = p != 2 and is_prime(p)
    split, _ = rational_roots(curve)
    n_odd = n % 2 == 1
    if not p_odd:
        return HypothesisReport(p, n, False, None, None, split, n_odd, None)
    red = reduction_type(curve, p)
    semistable = red.kind in (GOOD, MULTIPLICATIVE)
    v_even = red.v_delta % 2 == 0
    g = None
    if red.kind == MULTIPLICATIVE:
        g = math.gcd(n, 2 * red.k)
    return HypothesisReport(p, n, True, semistable, v_even, split, n_odd, g)
