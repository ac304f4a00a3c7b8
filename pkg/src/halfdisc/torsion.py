"""Division polynomials of y^2 = P(x) and the torsion x-divisors they cut out.

Everything runs off one parity-split recurrence on the x-parts X_m of the
division polynomials (X_m = psi_m for odd m, psi_m / y for even m):

    X_{2q+1} = X_{q+2} X_q^3 - X_{q-1} X_{q+1}^3     with P^2 on the term
               whose factors have even index (y^4 = P^2 after elimination),
    X_{2q}   = X_q (X_{q+2} X_{q-1}^2 - X_{q-2} X_{q+1}^2) / 2.

The division by 2 is exact over Z.  The recurrence is generic over a small
ring interface, instantiated three ways: full polynomials over Z (Kronecker
multiplication), the cubic quotient ring Z[x]/(M) (degree never exceeds 2,
the fast path for resultant valuations), and Z/p^e[x] at full degree (for
content valuations and finite-field checks).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction

from .curves import Curve
from .exact import (
    CubicQuotientRing,
    Poly,
    QuotientElem,
    content_primitive,
    kronecker_mul,
    poly_gcd,
    valuation,
)

# full materialization of psi_n has (n^2-1)/2 + 1 coefficients; past this
# threshold callers must opt in explicitly
DEFAULT_FULL_LIMIT = 31


class _PolyBackend:
    """Exact Z[x] arithmetic."""

    def __init__(self, curve: Curve):
        a, b, c = curve.a, curve.b, curve.c
        P = curve.poly()
        self.psq = P * P
        self.zero = Poly()
        self.one = Poly((1,))
        self.two = Poly((2,))
        self.x3 = _psi3(a, b, c)
        self.x4 = _x4(a, b, c)

    @staticmethod
    def mul(a: Poly, b: Poly) -> Poly:
        return a * b

    @staticmethod
    def sub(a: Poly, b: Poly) -> Poly:
        return a - b

    @staticmethod
    def half(a: Poly) -> Poly:
        out = []
        for v in a.c:
            if isinstance(v, int):
                if v & 1:
                    raise ArithmeticError("expected even coefficient in halving step")
                out.append(v >> 1)
            else:
                out.append(v / 2)
        return Poly(out)


class _QuotientBackend:
    """Arithmetic in K[x]/(M) for a monic cubic M."""

    def __init__(self, curve: Curve, modulus: Poly):
        ring = CubicQuotientRing(modulus)
        self.ring = ring
        a, b, c = curve.a, curve.b, curve.c
        pbar = ring.embed(curve.poly())
        self.psq = ring.mul(pbar.rep, pbar.rep)
        self.zero = (0, 0, 0)
        self.one = (1, 0, 0)
        self.two = (2, 0, 0)
        self.x3 = ring.embed(_psi3(a, b, c)).rep
        self.x4 = ring.embed(_x4(a, b, c)).rep

    def mul(self, a: tuple, b: tuple) -> tuple:
        return self.ring.mul(a, b)

    @staticmethod
    def sub(a: tuple, b: tuple) -> tuple:
        return tuple(x - y for x, y in zip(a, b))

    @staticmethod
    def half(a: tuple) -> tuple:
        out = []
        for v in a:
            if isinstance(v, int):
                if v & 1:
                    out.append(Fraction(v, 2))
                else:
                    out.append(v >> 1)
            else:
                half = v / 2
                out.append(half.numerator if half.denominator == 1 else half)
        return tuple(out)


class _ModBackend:
    """Z/p^e[x] at full degree; p odd so halving is a unit multiple."""

    def __init__(self, curve: Curve, p: int, e: int):
        if p == 2:
            raise ValueError("mod-2 backend unsupported (halving step)")
        self.m = p**e
        self.inv2 = pow(2, -1, self.m)
        a, b, c = curve.a, curve.b, curve.c
        P = [v % self.m for v in curve.poly().c]
        self.psq = self.mul(P, P)
        self.zero: list[int] = []
        self.one = [1]
        self.two = [2 % self.m]
        self.x3 = [v % self.m for v in _psi3(a, b, c).c]
        self.x4 = [v % self.m for v in _x4(a, b, c).c]

    def mul(self, a: list, b: list) -> list:
        if not a or not b:
            return []
        raw = kronecker_mul(a, b)
        out = [v % self.m for v in raw]
        while out and out[-1] == 0:
            out.pop()
        return out

    def sub(self, a: list, b: list) -> list:
        n = max(len(a), len(b))
        out = []
        for i in range(n):
            x = a[i] if i < len(a) else 0
            y = b[i] if i < len(b) else 0
            out.append((x - y) % self.m)
        while out and out[-1] == 0:
            out.pop()
        return out

    def half(self, a: list) -> list:
        out = [v * self.inv2 % self.m for v in a]
        while out and out[-1] == 0:
            out.pop()
        return out


def _psi3(a: int, b: int, c: int) -> Poly:
    return Poly((4 * a * c - b * b, 12 * c, 6 * b, 4 * a, 3))

def _x4(a: int, b: int, c: int) -> Poly:
    b2, b4, b6, b8 = 4 * a, 2 * b, 4 * c, 4 * a * c - b * b
    return Poly(
        (
            2 * (b4 * b8 - b6 * b6),
            2 * (b2 * b8 - b4 * b6),
            20 * b8,
            20 * b6,
            10 * b4,
            2 * b2,
            4,
        )
    )


def _x_part(backend, n: int):
    """X_n by memoized recursion over the given coefficient ring."""
    memo = {
        0: backend.zero,
        1: backend.one,
        2: backend.two,
        3: backend.x3,
        4: backend.x4,
    }
    mul, sub, half, psq = backend.mul, backend.sub, backend.half, backend.psq

    def build(m: int):
        got = memo.get(m)
        if got is not None:
            return got
        q, r = divmod(m, 2)
        if r:
            xq = build(q)
            xq1 = build(q + 1)
            t1 = mul(build(q + 2), mul(xq, mul(xq, xq)))
            t2 = mul(build(q - 1), mul(xq1, mul(xq1, xq1)))
            if q % 2 == 0:
                val = sub(mul(psq, t1), t2)
            else:
                val = sub(t1, mul(psq, t2))
        else:
            xm1 = build(q - 1)
            xp1 = build(q + 1)
            inner = sub(
                mul(build(q + 2), mul(xm1, xm1)), mul(build(q - 2), mul(xp1, xp1))
            )
            val = half(mul(build(q), inner))
        memo[m] = val
        return val

    return build(n)


# ---------------------------------------------------------------------------
# public interface


def division_polynomial(curve: Curve, n: int, full_limit: int = DEFAULT_FULL_LIMIT) -> Poly:
    """psi_n for odd n, psi_n/(2y) for even n, as an exact Poly in x.

    Materializes the full polynomial, so n is capped by full_limit; raise the
    cap explicitly for larger n or use the quotient-ring entry points.
    """
    if n < 0:
        raise ValueError("n must be nonnegative")
    if n > full_limit:
        raise ValueError(
            f"n = {n} exceeds the full-polynomial limit {full_limit}; "
            "pass full_limit explicitly to materialize larger n"
        )
    x = _x_part(_PolyBackend(curve), n)
    if n % 2 == 0 and n > 0:
        x = _PolyBackend.half(x)
    return x


@dataclass(frozen=True)
class TorsionDivisor:
    """The x-divisor of the n-torsion away from 2-torsion: zeros of h."""

    n: int
    h: Poly
    degree: int
    leading_coefficient: int

    def reference_degrees(self) -> tuple[int, ...]:
        """Candidate degree counts for this n (a single value for odd n)."""
        if self.n % 2:
            return ((self.n * self.n - 1) // 2,)
        # even n: the count with 2-torsion x's removed, and the same with
        # one fewer root (a convention that also drops x at infinity)
        return ((self.n * self.n - 4) // 2, (self.n * self.n - 6) // 2)

    def to_json(self) -> str:
        big = lambda v: str(v)
        return json.dumps(
            {
                "n": self.n,
                "degree": self.degree,
                "leadingCoefficient": big(self.leading_coefficient),
                "coefficients": [big(v) for v in self.h.c],
            }
        )


def torsion_x_polynomial(
    curve: Curve, n: int, full_limit: int = DEFAULT_FULL_LIMIT
) -> TorsionDivisor:
    """Primitive integer polynomial whose roots are the n-torsion x's
    outside the 2-torsion locus.

    Odd n: the primitive part of psi_n, degree (n^2-1)/2 enforced.
    Even n (experimental): the primitive part of psi_n/(2y) with any common
    factor with P removed; the measured degree is recorded.
    """
    if n < 2:
        raise ValueError("torsion divisor needs n >= 2")
    if n == 2:
        return TorsionDivisor(2, Poly((1,)), 0, 1)
    f = division_polynomial(curve, n, full_limit=full_limit)
    if n % 2 == 0:
        g = poly_gcd(f, curve.poly())
        if g.degree > 0:
            f = f.divexact(g)
    _content, prim, _sign = content_primitive(f)
    deg = prim.degree
    if n % 2:
        want = (n * n - 1) // 2
        if deg != want:
            raise ArithmeticError(
                f"h_{n} degree {deg} != (n^2-1)/2 = {want}; recursion broken"
            )
    return TorsionDivisor(n, prim, deg, int(prim.lead))


def psi_mod_cubic(curve: Curve, n: int, modulus: Poly | None = None) -> QuotientElem:
    """psi_n reduced in Z[x]/(modulus), content NOT removed; odd n.

    modulus defaults to the curve cubic itself, where the recurrence's P^2
    factor vanishes and the reduction is cheapest.
    """
    if n % 2 == 0:
        raise ValueError("quotient-ring path handles odd n only")
    if modulus is None:
        modulus = curve.poly()
    backend = _QuotientBackend(curve, modulus)
    rep = _x_part(backend, n)
    return QuotientElem(rep, backend.ring)


def psi_content_valuation(curve: Curve, n: int, p: int) -> int:
    """v_p(content(psi_n)) for odd n.  Zero unless p divides n.

    The content divides the leading coefficient n, so v_p(content) <= v_p(n)
    and one pass modulo p^(v_p(n)+1) reads it off exactly.
    """
    if n % 2 == 0:
        raise ValueError("content valuation implemented for odd n only")
    if n % p:
        return 0
    e = valuation(n, p) + 1
    coeffs = _x_part(_ModBackend(curve, p, e), n)
    best = e
    for v in coeffs:
        if v:
            w = 0
            while v % p == 0:
                v //= p
                w += 1
            best = min(best, w)
            if best == 0:
                break
    if best >= e:
        raise ArithmeticError("content valuation exceeded its n-derived bound")
    return best


def psi_content(curve: Curve, n: int) -> int:
    """Full content of psi_n for odd n (supported only on primes dividing n)."""
    out = 1
    for p in _prime_divisors(n):
        out *= p ** psi_content_valuation(curve, n, p)
    return out


def _prime_divisors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def psi_mod_prime(curve: Curve, n: int, p: int, e: int = 1) -> list[int]:
    """Coefficients of psi_n mod p^e (odd n), ascending, trailing zeros cut."""
    if n % 2 == 0:
        raise ValueError("odd n only")
    return list(_x_part(_ModBackend(curve, p, e), n))


def evaluate_h_mod(curve: Curve, n: int, modulus: Poly) -> QuotientElem:
    """h_n mod a monic cubic modulus, without materializing h_n.

    Runs the recurrence in K[x]/(modulus) and divides out the content of
    psi_n (known exactly from its per-prime valuations).
    """
    if n < 1 or n % 2 == 0:
        raise ValueError("evaluate_h_mod requires odd n >= 1")
    if modulus.degree != 3 or modulus.lead != 1:
        raise ValueError("modulus must be a monic cubic")
    elem = psi_mod_cubic(curve, n, modulus)
    c = psi_content(curve, n)
    if c == 1:
        return elem
    out = []
    for v in elem.rep:
        if isinstance(v, int):
            q, r = divmod(v, c)
            if r:
                raise ArithmeticError("content division must be exact")
            out.append(q)
        else:
            out.append(v / c)
    return QuotientElem(tuple(out), elem.ring)
