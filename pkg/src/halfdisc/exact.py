"""Exact arithmetic kernel: integers, rationals, dense polynomials, resultants.

Coefficients are plain Python ints whenever the value is integral and
``fractions.Fraction`` otherwise; every operation in this module is exact.
The resultant is computed by a fraction-free subresultant remainder sequence,
so no rational arithmetic appears on integer inputs.  Large integer
polynomial products go through Kronecker substitution (one big-int multiply
per product) once the schoolbook cost would dominate.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterator, Sequence, Union

Scalar = Union[int, Fraction]

# degree of the zero polynomial; compares below every int and propagates
# through degree arithmetic instead of masquerading as -1
NEG_INF = float("-inf")

_SMALL_PRIME_BOUND = 100_000


def _norm(c: Scalar) -> Scalar:
    """Collapse Fractions with unit denominator back to int."""
    if isinstance(c, Fraction):
        if c.denominator == 1:
            return c.numerator
        return c
    return c


# ---------------------------------------------------------------------------
# primes and valuations


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin for n < 3.3e24, strong-probable beyond."""
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def small_primes(bound: int = _SMALL_PRIME_BOUND) -> list[int]:
    """Primes below bound, sieved once and cached."""
    global _SIEVE_CACHE
    cached_bound, cached = _SIEVE_CACHE
    if bound <= cached_bound:
        if bound == cached_bound:
            return cached
        idx = _bisect(cached, bound)
        return cached[:idx]
    sieve = bytearray([1]) * bound
    sieve[0:2] = b"\x00\x00"
    for i in range(2, math.isqrt(bound) + 1):
        if sieve[i]:
            sieve[i * i :: i] = bytearray(len(sieve[i * i :: i]))
    out = [i for i in range(bound) if sieve[i]]
    _SIEVE_CACHE = (bound, out)
    return out


def _bisect(xs: list[int], v: int) -> int:
    lo, hi = 0, len(xs)
    while lo < hi:
        mid = (lo + hi) // 2
        if xs[mid] < v:
            lo = mid + 1
        else:
            hi = mid
    return lo


_SIEVE_CACHE: tuple[int, list[int]] = (0, [])


def valuation(q: Scalar, p: int) -> int:
    """p-adic valuation of a nonzero rational.  Errors on q = 0 or composite p."""
    if not is_prime(p):
        raise ValueError(f"valuation: modulus {p} is not prime")
    if q == 0:
        raise ValueError("valuation of zero is undefined")
    if isinstance(q, Fraction):
        return _int_valuation(q.numerator, p) - _int_valuation(q.denominator, p)
    return _int_valuation(int(q), p)


def _int_valuation(n: int, p: int) -> int:
    if n == 0:
        raise ValueError("valuation of zero is undefined")
    n = abs(n)
    v = 0
    # binary lifting: strip p^(2^j) blocks so huge valuations stay cheap
    pk = p
    steps = []
    while n % pk == 0:
        steps.append(pk)
        pk = pk * pk
    for pk in reversed(steps):
        while n % pk == 0:
            n //= pk
            v += _ilog_exact(pk, p)
    return v


def _ilog_exact(pk: int, p: int) -> int:
    e = 0
    while pk > 1:
        pk //= p
        e += 1
    return e


def pollard_rho(n: int) -> int:
    """A nontrivial factor of odd composite n (Floyd cycle finding)."""
    if n % 2 == 0:
        return 2
    for c in range(1, 100):
        x = y = 2
        d = 1
        while d == 1:
            x = (x * x + c) % n
            y = (y * y + c) % n
            y = (y * y + c) % n
            d = math.gcd(abs(x - y), n)
        if d != n:
            return d
    raise ValueError(f"pollard_rho failed on {n}")


def factorize(n: int, extra_primes: Sequence[int] = ()) -> dict[int, int]:
    """Full factorization of |n| (n nonzero) as {prime: exponent}."""
    if n == 0:
        raise ValueError("factorize(0)")
    n = abs(n)
    out: dict[int, int] = {}
    for p in extra_primes:
        while n % p == 0:
            n //= p
            out[p] = out.get(p, 0) + 1
    for p in small_primes():
        if p * p > n:
            break
        while n % p == 0:
            n //= p
            out[p] = out.get(p, 0) + 1
    stack = [n] if n > 1 else []
    while stack:
        m = stack.pop()
        if m == 1:
            continue
        if is_prime(m):
            out[m] = out.get(m, 0) + 1
            continue
        d = pollard_rho(m)
        stack.append(d)
        stack.append(m // d)
    return dict(sorted(out.items()))


def log_abs(n: int) -> float:
    """Natural log of |n| for arbitrarily large nonzero int, ~1 ulp accurate."""
    if n == 0:
        raise ValueError("log of zero")
    n = abs(n)
    bits = n.bit_length()
    if bits <= 900:
        return math.log(n)
    top = n >> (bits - 64)
    return math.log(top) + (bits - 64) * math.log(2)


# ---------------------------------------------------------------------------
# Kronecker-substitution integer polynomial product


def _pack(coeffs: list[int], slot_bytes: int) -> int:
    """Pack signed coefficients into one big int, one slot per coefficient.

    Coefficients are offset by half the slot so every packed digit is
    nonnegative; the matching offset integer is subtracted afterwards.
    """
    bits = 8 * slot_bytes
    half = 1 << (bits - 1)
    buf = bytearray(slot_bytes * len(coeffs))
    for i, c in enumerate(coeffs):
        buf[i * slot_bytes : (i + 1) * slot_bytes] = (c + half).to_bytes(
            slot_bytes, "little"
        )
    packed = int.from_bytes(buf, "little")
    offset = ((1 << (bits * len(coeffs))) - 1) // ((1 << bits) - 1) << (bits - 1)
    return packed - offset


def _unpack(value: int, slot_bytes: int, count: int) -> list[int]:
    bits = 8 * slot_bytes
    half = 1 << (bits - 1)
    offset = ((1 << (bits * count)) - 1) // ((1 << bits) - 1) << (bits - 1)
    shifted = value + offset
    buf = shifted.to_bytes(slot_bytes * count, "little")
    return [
        int.from_bytes(buf[i * slot_bytes : (i + 1) * slot_bytes], "little") - half
        for i in range(count)
    ]


def kronecker_mul(a: list[int], b: list[int]) -> list[int]:
    """Product of two integer coefficient lists via one big-int multiply."""
    if not a or not b:
        return []
    ma = max(abs(c) for c in a)
    mb = max(abs(c) for c in b)
    if ma == 0 or mb == 0:
        return [0] * (len(a) + len(b) - 1)
    # every product coefficient is bounded by min(len) * ma * mb; one guard
    # bit for the sign offset and one for slack
    bound = min(len(a), len(b)) * ma * mb
    slot_bytes = (bound.bit_length() + 2 + 7) // 8
    prod = _pack(a, slot_bytes) * _pack(b, slot_bytes)
    return _unpack(prod, slot_bytes, len(a) + len(b) - 1)


def _schoolbook_mul(a: Sequence[Scalar], b: Sequence[Scalar]) -> list[Scalar]:
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai == 0:
            continue
        for j, bj in enumerate(b):
            out[i + j] += ai * bj
    return out


_KRONECKER_CUTOFF = 64  # len(a)*len(b) above which packing wins for int inputs


# ---------------------------------------------------------------------------
# polynomials


class Poly:
    """Dense univariate polynomial with exact coefficients, ascending order.

    The zero polynomial has degree NEG_INF (never -1), so degree comparisons
    against ints do the right thing and degree arithmetic propagates the
    sentinel loudly instead of producing off-by-one garbage.
    """

    __slots__ = ("c",)

    def __init__(self, coeffs: Sequence[Scalar] = ()):
        cs = [_norm(Fraction(x) if isinstance(x, str) else x) for x in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.c = tuple(cs)

    @staticmethod
    def x() -> "Poly":
        return Poly((0, 1))

    @staticmethod
    def const(v: Scalar) -> "Poly":
        return Poly((v,))

    @property
    def degree(self):
        return len(self.c) - 1 if self.c else NEG_INF

    def is_zero(self) -> bool:
        return not self.c

    def is_integral(self) -> bool:
        return all(isinstance(v, int) for v in self.c)

    @property
    def lead(self) -> Scalar:
        if not self.c:
            raise ValueError("zero polynomial has no leading coefficient")
        return self.c[-1]

    def __eq__(self, other) -> bool:
        if isinstance(other, Poly):
            return self.c == other.c
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.c)

    def __neg__(self) -> "Poly":
        return Poly([-v for v in self.c])

    def __add__(self, other: "Poly") -> "Poly":
        a, b = self.c, other.c
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, v in enumerate(b):
            out[i] = out[i] + v
        return Poly(out)

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __mul__(self, other: "Poly") -> "Poly":
        a, b = self.c, other.c
        if not a or not b:
            return Poly()
        if (
            len(a) * len(b) >= _KRONECKER_CUTOFF
            and self.is_integral()
            and other.is_integral()
        ):
            return Poly(kronecker_mul(list(a), list(b)))
        return Poly(_schoolbook_mul(a, b))

    def __pow__(self, e: int) -> "Poly":
        if e < 0:
            raise ValueError("negative polynomial power")
        out = Poly((1,))
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def scale(self, s: Scalar) -> "Poly":
        return Poly([v * s for v in self.c])

    def __divmod__(self, other: "Poly") -> tuple["Poly", "Poly"]:
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        q: list[Scalar] = [0] * max(len(self.c) - len(other.c) + 1, 0)
        r = list(self.c)
        dlead = other.c[-1]
        dlen = len(other.c)
        for k in range(len(r) - dlen, -1, -1):
            coef = r[k + dlen - 1]
            if coef == 0:
                continue
            coef = _norm(Fraction(coef, dlead)) if dlead != 1 else coef
            q[k] = coef
            for i, dv in enumerate(other.c):
                r[k + i] = _norm(r[k + i] - coef * dv)
        return Poly(q), Poly(r[: dlen - 1])

    def __floordiv__(self, other: "Poly") -> "Poly":
        return divmod(self, other)[0]

    def __mod__(self, other: "Poly") -> "Poly":
        return divmod(self, other)[1]

    def divexact(self, other: "Poly") -> "Poly":
        q, r = divmod(self, other)
        if not r.is_zero():
            raise ValueError("inexact polynomial division")
        return q

    def derivative(self) -> "Poly":
        return Poly([i * v for i, v in enumerate(self.c)][1:])

    def __call__(self, value):
        acc = 0
        for v in reversed(self.c):
            acc = acc * value + v
        return acc

    def float_coeffs(self) -> list[float]:
        return [float(v) for v in self.c]

    def __repr__(self) -> str:
        if not self.c:
            return "Poly(0)"
        terms = []
        for i, v in enumerate(self.c):
            if v == 0:
                continue
            if i == 0:
                terms.append(str(v))
            elif i == 1:
                terms.append(f"{v}*x")
            else:
                terms.append(f"{v}*x^{i}")
        return "Poly(" + " + ".join(reversed(terms)) + ")"


def content_primitive(f: Poly) -> tuple[Scalar, Poly, int]:
    """Split f = sign * content * primitive with content > 0 and primitive
    having positive integral leading coefficient and coprime coefficients.

    Returns (content, primitive, sign).  Rational input is allowed; content
    is then the positive rational making the primitive part integral.
    """
    if f.is_zero():
        raise ValueError("content of the zero polynomial is undefined")
    den = 1
    for v in f.c:
        if isinstance(v, Fraction):
            den = den * v.denominator // math.gcd(den, v.denominator)
    ints = [int(v * den) for v in f.c]
    g = 0
    for v in ints:
        g = math.gcd(g, v)
    sign = 1 if ints[-1] > 0 else -1
    prim = Poly([sign * v // g for v in ints])
    content = _norm(Fraction(g, den))
    return content, prim, sign


def _prem(a: list[int], b: list[int]) -> list[int]:
    """Pseudo-remainder lc(b)^(da-db+1) * a mod b for integer lists."""
    da, db = len(a) - 1, len(b) - 1
    lb = b[-1]
    r = list(a)
    for k in range(da - db, -1, -1):
        coef = r[k + db]
        if lb != 1:
            # R <- lc(b)*R - coef*x^k*b, with coef read before the scaling
            for i in range(len(r)):
                r[i] *= lb
        if coef != 0:
            for i in range(db + 1):
                r[k + i] -= coef * b[i]
    del r[db:]
    while r and r[-1] == 0:
        r.pop()
    return r


def _int_content(xs: Sequence[int]) -> int:
    g = 0
    for v in xs:
        g = math.gcd(g, v)
    return g


def _subresultant_int(a: list[int], b: list[int]) -> int:
    """Resultant of two nonzero integer coefficient lists.

    Fraction-free subresultant PRS; every division below is exact by the
    subresultant theory, and that exactness is asserted.
    """
    m, n = len(a) - 1, len(b) - 1
    sign = 1
    if m < n:
        a, b, m, n = b, a, n, m
        if m & n & 1:
            sign = -1
    if n == 0:
        return sign * b[0] ** m
    ca, cb = _int_content(a), _int_content(b)
    a = [v // ca for v in a]
    b = [v // cb for v in b]
    scale = ca**n * cb**m
    g = h = 1
    while True:
        delta = m - n
        if m & n & 1:
            sign = -sign
        r = _prem(a, b)
        if not r:
            return 0
        a, m = b, n
        div = g * h**delta
        b = []
        for v in r:
            q, rem = divmod(v, div)
            assert rem == 0, "subresultant division must be exact"
            b.append(q)
        n = len(b) - 1
        g = a[-1]
        h = h if delta == 0 else (g**delta if delta == 1 else g**delta // h ** (delta - 1))
        if n == 0:
            break
    # m = degree of the last nonconstant member of the sequence
    num = b[0] ** m
    res, rem = divmod(num, h ** (m - 1)) if m > 1 else (num, 0)
    assert rem == 0, "final subresultant division must be exact"
    return sign * scale * res


def resultant(f: Poly, g: Poly) -> Scalar:
    """Res(f, g), exact, over the rationals.

    Errors on zero input (by convention, not by limit); returns c^deg(f)
    when g = c is constant.
    """
    if f.is_zero() or g.is_zero():
        raise ValueError("resultant with a zero polynomial is undefined")
    fc, fp, fs = content_primitive(f)
    gc, gp, gs = content_primitive(g)
    raw = _subresultant_int(list(fp.c), list(gp.c))
    df, dg = len(f.c) - 1, len(g.c) - 1
    out = Fraction(raw)
    out *= (Fraction(fc) * fs) ** dg
    out *= (Fraction(gc) * gs) ** df
    return _norm(out)


def poly_gcd(f: Poly, g: Poly) -> Poly:
    """Monic gcd over the rationals (Euclid; fine for the small degrees used)."""
    a, b = f, g
    while not b.is_zero():
        a, b = b, a % b
    if a.is_zero():
        return a
    return a.scale(_norm(Fraction(1, 1) / Fraction(a.lead)))


# ---------------------------------------------------------------------------
# the cubic quotient ring Z[x]/(M) and its norm form


class QuotientElem:
    """Residue mod a monic cubic, stored as (c0, c1, c2) for c0+c1*x+c2*x^2."""

    __slots__ = ("rep", "ring")

    def __init__(self, rep: tuple[Scalar, Scalar, Scalar], ring: "CubicQuotientRing"):
        self.rep = rep
        self.ring = ring

    def _check(self, other: "QuotientElem") -> None:
        if self.ring.modulus != other.ring.modulus:
            raise ValueError("quotient ring modulus mismatch")

    def __add__(self, other: "QuotientElem") -> "QuotientElem":
        self._check(other)
        a, b = self.rep, other.rep
        return QuotientElem(
            (_norm(a[0] + b[0]), _norm(a[1] + b[1]), _norm(a[2] + b[2])), self.ring
        )

    def __sub__(self, other: "QuotientElem") -> "QuotientElem":
        self._check(other)
        a, b = self.rep, other.rep
        return QuotientElem(
            (_norm(a[0] - b[0]), _norm(a[1] - b[1]), _norm(a[2] - b[2])), self.ring
        )

    def __mul__(self, other: "QuotientElem") -> "QuotientElem":
        self._check(other)
        return QuotientElem(self.ring.mul(self.rep, other.rep), self.ring)

    def scale(self, s: Scalar) -> "QuotientElem":
        a = self.rep
        return QuotientElem((_norm(a[0] * s), _norm(a[1] * s), _norm(a[2] * s)), self.ring)

    def __eq__(self, other) -> bool:
        if isinstance(other, QuotientElem):
            return self.rep == other.rep and self.ring.modulus == other.ring.modulus
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.rep, self.ring.modulus))

    def norm(self) -> Scalar:
        return self.ring.norm(self.rep)

    def to_poly(self) -> Poly:
        return Poly(self.rep)

    def __repr__(self) -> str:
        return f"QuotientElem({self.rep})"


class CubicQuotientRing:
    """K[x]/(M) for a monic cubic M, with the multiplication pre-reduced.

    Reduction constants: x^3 = s2 x^2 + s1 x + s0 and the once-lifted row
    x^4 = t2 x^2 + t1 x + t0, so a degree-4 product reduces in 6 scalar
    multiplies.  norm() is the determinant of multiplication-by-e, which for
    a monic modulus equals Res(M, e-lift).
    """

    __slots__ = ("modulus", "s0", "s1", "s2", "t0", "t1", "t2")

    def __init__(self, modulus: Poly):
        if modulus.degree != 3 or modulus.lead != 1:
            raise ValueError("quotient modulus must be a monic cubic")
        self.modulus = modulus
        m0, m1, m2 = modulus.c[0], modulus.c[1], modulus.c[2]
        self.s0, self.s1, self.s2 = -m0, -m1, -m2
        self.t2 = _norm(self.s2 * self.s2 + self.s1)
        self.t1 = _norm(self.s2 * self.s1 + self.s0)
        self.t0 = _norm(self.s2 * self.s0)

    def embed(self, f: Poly) -> QuotientElem:
        r = f % self.modulus if f.degree >= 3 else f
        cs = list(r.c) + [0] * (3 - len(r.c))
        return QuotientElem((cs[0], cs[1], cs[2]), self)

    def elem(self, c0: Scalar, c1: Scalar, c2: Scalar) -> QuotientElem:
        return QuotientElem((_norm(c0), _norm(c1), _norm(c2)), self)

    def mul(self, a: tuple, b: tuple) -> tuple:
        a0, a1, a2 = a
        b0, b1, b2 = b
        g0 = a0 * b0
        g1 = a0 * b1 + a1 * b0
        g2 = a0 * b2 + a1 * b1 + a2 * b0
        g3 = a1 * b2 + a2 * b1
        g4 = a2 * b2
        return (
            _norm(g0 + g3 * self.s0 + g4 * self.t0),
            _norm(g1 + g3 * self.s1 + g4 * self.t1),
            _norm(g2 + g3 * self.s2 + g4 * self.t2),
        )

    def shift_mul_x(self, a: tuple) -> tuple:
        a0, a1, a2 = a
        return (
            _norm(a2 * self.s0),
            _norm(a0 + a2 * self.s1),
            _norm(a1 + a2 * self.s2),
        )

    def norm(self, a: tuple) -> Scalar:
        v0 = a
        v1 = self.shift_mul_x(v0)
        v2 = self.shift_mul_x(v1)
        det = (
            v0[0] * (v1[1] * v2[2] - v1[2] * v2[1])
            - v1[0] * (v0[1] * v2[2] - v0[2] * v2[1])
            + v2[0] * (v0[1] * v1[2] - v0[2] * v1[1])
        )
        return _norm(det)
