import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from halfdisc.exact import (
    NEG_INF,
    CubicQuotientRing,
    Poly,
    content_primitive,
    factorize,
    is_prime,
    kronecker_mul,
    log_abs,
    resultant,
    small_primes,
    valuation,
)
from oracles import sylvester_resultant

coeff = st.integers(min_value=-50, max_value=50)


def nonzero_poly(max_deg: int):
    return (
        st.lists(coeff, min_size=1, max_size=max_deg + 1)
        .map(Poly)
        .filter(lambda f: not f.is_zero())
    )


class TestValuation:
    def test_examples(self):
        assert valuation(Fraction(12, 5), 2) == 2
        assert valuation(Fraction(9, 4), 2) == -2
        assert valuation(27, 3) == 3
        assert valuation(-27, 3) == 3
        assert valuation(1, 7) == 0

    def test_zero_rejected(self):
        with pytest.raises(ValueError):
            valuation(0, 3)

    def test_composite_modulus_rejected(self):
        with pytest.raises(ValueError):
            valuation(12, 6)
        with pytest.raises(ValueError):
            valuation(12, 1)

    def test_huge_valuation(self):
        assert valuation(3**5000, 3) == 5000
        assert valuation(Fraction(1, 3**5000), 3) == -5000

    def test_additivity_random(self):
        rng = random.Random(7)
        for _ in range(200):
            p = rng.choice([2, 3, 5, 7, 11, 101])
            a = Fraction(rng.randint(1, 10**6), rng.randint(1, 10**6))
            b = Fraction(rng.randint(1, 10**6), rng.randint(1, 10**6))
            assert valuation(a * b, p) == valuation(a, p) + valuation(b, p)


class TestPrimes:
    def test_small(self):
        ps = small_primes(100)
        assert ps[:5] == [2, 3, 5, 7, 11]
        assert all(is_prime(p) for p in ps)
        assert not is_prime(1) and not is_prime(0) and not is_prime(561)

    def test_carmichael_and_large(self):
        assert not is_prime(341550071728321)
        assert is_prime(2**61 - 1)

    def test_factorize(self):
        assert factorize(8100) == {2: 2, 3: 4, 5: 2}
        assert factorize(-23) == {23: 1}
        big = (2**61 - 1) * 2**3 * 529
        assert factorize(big) == {2: 3, 23: 2, 2**61 - 1: 1}


class TestPoly:
    def test_zero_degree_sentinel(self):
        z = Poly()
        assert z.degree == NEG_INF
        assert z.degree != -1
        assert z.degree < 0
        assert Poly((5,)).degree == 0

    def test_arith(self):
        x = Poly.x()
        f = x * x + x.scale(2) + Poly.const(1)
        assert f.c == (1, 2, 1)
        q, r = divmod(f, x + Poly.const(1))
        assert q == x + Poly.const(1) and r.is_zero()

    def test_divmod_fractions(self):
        f = Poly((1, 0, 2))
        g = Poly((1, 3))
        q, r = divmod(f, g)
        assert g * q + r == f

    def test_eval(self):
        f = Poly((-1, 0, 1))
        assert f(3) == 8
        assert f(Fraction(1, 2)) == Fraction(-3, 4)

    def test_derivative(self):
        assert Poly((5, 3, 0, 2)).derivative() == Poly((3, 0, 6))

    def test_log_abs(self):
        n = 3**4000
        assert abs(log_abs(n) - 4000 * math.log(3)) < 1e-9


@settings(max_examples=60, deadline=None)
@given(
    st.lists(st.integers(min_value=-(10**6), max_value=10**6), min_size=1, max_size=40),
    st.lists(st.integers(min_value=-(10**6), max_value=10**6), min_size=1, max_size=40),
)
def test_kronecker_matches_schoolbook(a, b):
    lhs = kronecker_mul(a, b)
    f, g = Poly(a), Poly(b)
    rhs = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        for j, bj in enumerate(b):
            rhs[i + j] += ai * bj
    assert lhs == rhs
    assert Poly(lhs) == f * g


class TestContentPrimitive:
    def test_example(self):
        content, prim, sign = content_primitive(Poly((0, -4)))
        assert content == 4
        assert prim == Poly.x()
        assert sign == -1

    def test_rational(self):
        content, prim, sign = content_primitive(Poly((Fraction(2, 3), Fraction(4, 3))))
        assert prim == Poly((1, 2))
        assert content == Fraction(2, 3)
        assert sign == 1

    @settings(max_examples=80, deadline=None)
    @given(
        st.lists(
            st.fractions(
                min_value=-30, max_value=30, max_denominator=20
            ),
            min_size=1,
            max_size=8,
        ).filter(lambda cs: any(c != 0 for c in cs))
    )
    def test_round_trip(self, cs):
        f = Poly(cs)
        content, prim, sign = content_primitive(f)
        assert content > 0
        assert prim.lead > 0
        assert prim.is_integral()
        g = 0
        for v in prim.c:
            g = math.gcd(g, v)
        assert g == 1
        assert prim.scale(content * sign) == f


class TestResultant:
    def test_zero_poly_rejected(self):
        with pytest.raises(ValueError):
            resultant(Poly(), Poly((1, 2)))

    def test_common_root_is_zero(self):
        assert resultant(Poly((-1, 0, 1)), Poly((3, -4, 1))) == 0

    def test_constant_cases(self):
        f = Poly((1, 0, 0, 2))
        assert resultant(f, Poly.const(5)) == 5**3
        assert resultant(Poly.const(5), f) == 5**3
        assert resultant(Poly.const(3), Poly.const(7)) == 1

    def test_monic_cubic_disc(self):
        # disc(P) = -Res(P, P') for monic cubics
        for a, b, c in [(1, -2, 0), (8, -9, 0), (0, -1, -1), (0, -1, 0)]:
            P = Poly((c, b, a, 1))
            disc = (
                18 * a * b * c - 4 * a**3 * c + a * a * b * b - 4 * b**3 - 27 * c * c
            )
            assert resultant(P, P.derivative()) == -disc

    @settings(max_examples=100, deadline=None)
    @given(nonzero_poly(6), nonzero_poly(6))
    def test_matches_sylvester_oracle(self, f, g):
        assert resultant(f, g) == sylvester_resultant(list(f.c), list(g.c))

    @settings(max_examples=60, deadline=None)
    @given(nonzero_poly(4), nonzero_poly(4), nonzero_poly(4))
    def test_multiplicative(self, f, g, h):
        assert resultant(f, g * h) == resultant(f, g) * resultant(f, h)

    @settings(max_examples=60, deadline=None)
    @given(nonzero_poly(5), nonzero_poly(5))
    def test_antisymmetry(self, f, g):
        sign = (-1) ** ((len(f.c) - 1) * (len(g.c) - 1))
        assert resultant(f, g) == sign * resultant(g, f)

    def test_integer_inputs_integer_output(self):
        rng = random.Random(3)
        for _ in range(50):
            f = Poly([rng.randint(-9, 9) for _ in range(rng.randint(1, 6))])
            g = Poly([rng.randint(-9, 9) for _ in range(rng.randint(1, 6))])
            if f.is_zero() or g.is_zero():
                continue
            r = resultant(f, g)
            assert isinstance(r, int)
            if r != 0:
                assert valuation(r, 5) >= 0


class TestQuotientRing:
    def setup_method(self):
        self.ring = CubicQuotientRing(Poly((-2, 0, 0, 1)))  # x^3 - 2

    def test_mul_wraps(self):
        x = self.ring.elem(0, 1, 0)
        x2 = self.ring.elem(0, 0, 1)
        assert (x * x2).rep == (2, 0, 0)
        assert (x2 * x2).rep == (0, 2, 0)

    def test_modulus_mismatch(self):
        other = CubicQuotientRing(Poly((-3, 0, 0, 1)))
        with pytest.raises(ValueError):
            _ = self.ring.elem(1, 0, 0) + other.elem(1, 0, 0)

    def test_non_monic_rejected(self):
        with pytest.raises(ValueError):
            CubicQuotientRing(Poly((1, 0, 0, 2)))
        with pytest.raises(ValueError):
            CubicQuotientRing(Poly((1, 1)))

    def test_embed_reduces(self):
        f = Poly((0, 0, 0, 0, 1))  # x^4 = 2x mod x^3-2
        assert self.ring.embed(f).rep == (0, 2, 0)

    @settings(max_examples=60, deadline=None)
    @given(
        st.lists(coeff, min_size=3, max_size=3),
        st.lists(coeff, min_size=4, max_size=4),
    )
    def test_norm_is_resultant(self, rep, mod_low):
        modulus = Poly(mod_low[:3] + [1])
        if modulus.degree != 3:
            return
        ring = CubicQuotientRing(modulus)
        e = ring.elem(*rep)
        lift = e.to_poly()
        if lift.is_zero():
            assert e.norm() == 0
            return
        assert e.norm() == resultant(modulus, lift)
