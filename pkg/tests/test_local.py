import random
from fractions import Fraction

import pytest

from halfdisc.curves import from_cubic
from halfdisc.local import (
    IntersectionRecord,
    convergence_sequence,
    intersection_number,
    intersection_number_via_resultant,
    limit_report,
    records_as_rows,
    tolerance_constant,
)

K1 = from_cubic(1, -2, 0)   # disc 36, multiplicative k=1 at p=3
K2 = from_cubic(8, -9, 0)   # disc 8100, multiplicative k=2 at p=3
E23 = from_cubic(0, -1, -1)  # disc -23

# frozen from the slow subresultant path (see test_torsion frozen tables);
# both curves satisfy value = (n^2-1)/2 * k exactly at p = 3
FROZEN_K1_AT_3 = {n: (n * n - 1) // 2 for n in range(3, 32, 2)}
FROZEN_K2_AT_3 = {n: n * n - 1 for n in range(3, 32, 2)}


class TestIntersectionNumber:
    @pytest.mark.parametrize("n", list(range(3, 32, 2)))
    def test_k1_frozen(self, n):
        assert intersection_number(K1, 3, n) == FROZEN_K1_AT_3[n]

    @pytest.mark.parametrize("n", list(range(3, 32, 2)))
    def test_k2_frozen(self, n):
        assert intersection_number(K2, 3, n) == FROZEN_K2_AT_3[n]

    def test_n2_trivial(self):
        assert intersection_number(K1, 3, 2) == 0

    @pytest.mark.parametrize("p", [5, 7])
    def test_good_reduction_vanishes(self, p):
        for n in range(3, 32, 2):
            if n % p:
                assert intersection_number(K1, p, n) == 0

    def test_good_reduction_p_dividing_n(self):
        # good reduction at 5 and 7, n a multiple of p: reported, >= 0,
        # no limit asserted (naively could pick up content or supersingular
        # contributions; observed 0 here but only nonnegativity is contract)
        for p in (5, 7):
            v = intersection_number(K1, p, p)
            assert v >= 0

    def test_even_n(self):
        # even path goes through the materialized primitive polynomial
        v4 = intersection_number(K1, 3, 4)
        assert v4 == intersection_number_via_resultant(K1, 3, 4)
        assert v4 >= 0

    def test_p2_rejected(self):
        with pytest.raises(ValueError):
            intersection_number(K1, 2, 3)

    def test_composite_p_rejected(self):
        with pytest.raises(ValueError):
            intersection_number(K1, 9, 3)

    def test_small_n_rejected(self):
        with pytest.raises(ValueError):
            intersection_number(K1, 3, 1)


class TestFastSlowAgreement:
    @pytest.mark.parametrize("n", [3, 5, 7, 9, 11, 13])
    def test_paths_agree(self, n):
        for cv in (K1, K2, E23, from_cubic(0, 0, 1)):
            for p in (3, 5, 23):
                assert intersection_number(cv, p, n) == (
                    intersection_number_via_resultant(cv, p, n)
                )


class TestTranslationInvariance:
    def test_twenty_random_cases(self):
        rng = random.Random(20)
        done = 0
        while done < 20:
            a, b, c = (rng.randint(-8, 8) for _ in range(3))
            try:
                cv = from_cubic(a, b, c)
            except ValueError:
                continue
            t = rng.randint(-10, 10)
            p = rng.choice([3, 5, 7, 11])
            n = rng.choice([3, 5, 7, 9])
            moved = cv.translate(t)
            assert moved.disc_p == cv.disc_p
            assert intersection_number(moved, p, n) == intersection_number(cv, p, n)
            done += 1


class TestConvergenceSequence:
    def test_k1_records(self):
        recs = convergence_sequence(K1, 3, [3, 5, 7, 9, 11])
        assert [r.value for r in recs] == [4, 12, 24, 40, 60]
        assert all(r.k_target == 1 for r in recs)
        assert recs[2].ratio == Fraction(24, 49)

    def test_threaded_identical(self):
        ns = [3, 5, 7, 9, 11, 13]
        assert convergence_sequence(K2, 3, ns) == convergence_sequence(
            K2, 3, ns, threads=4
        )

    def test_env_threads(self, monkeypatch):
        monkeypatch.setenv("HALFDISC_THREADS", "3")
        assert convergence_sequence(K1, 3, [3, 5, 7]) == convergence_sequence(
            K1, 3, [3, 5, 7], threads=1
        )

    def test_ordering_enforced(self):
        with pytest.raises(ValueError):
            convergence_sequence(K1, 3, [5, 3])
        with pytest.raises(ValueError):
            convergence_sequence(K1, 3, [3, 3, 5])

    def test_good_prime_zero_column(self):
        recs = convergence_sequence(K1, 7, [3, 5, 9, 11])
        assert all(r.value == 0 for r in recs)
        assert all(r.k_target == 0 for r in recs)


class TestLimitReport:
    def test_synthetic_exact_records_pass(self):
        # records sitting exactly on n^2 * k have zero error at every n
        k = 2
        recs = [
            IntersectionRecord(
                p=3, n=n, value=k * n * n, ratio=Fraction(k), k_target=k
            )
            for n in (3, 5, 7)
        ]
        rep = limit_report(recs)
        assert rep.passed is True
        assert all(row.abs_error == 0 for row in rep.rows)
        assert rep.c_constant == tolerance_constant(2) == 8

    def test_real_k1_fails_schedule(self):
        # the exact law value = (n^2-1)/2 sits at ratio ~ 1/2, so the
        # documented schedule |ratio - 1| <= 2/n cannot hold; the report
        # must say so rather than pass
        rep = limit_report(convergence_sequence(K1, 3, [3, 5, 7, 9, 11]))
        assert rep.k == 1
        assert rep.passed is False
        for row in rep.rows:
            assert row.abs_error == Fraction(1, 2) + Fraction(1, 2 * row.n**2)

    def test_ratio_converges_to_half_k(self):
        # the observable limit of value/n^2 is k/2 for both test curves
        for cv, k in ((K1, 1), (K2, 2)):
            recs = convergence_sequence(cv, 3, [21, 31], full_limit=31)
            for r in recs:
                assert abs(r.ratio - Fraction(k, 2)) <= Fraction(k, 2 * r.n**2)

    def test_good_reduction_skip_rule(self):
        recs = convergence_sequence(K1, 5, [3, 5, 7, 15])
        rep = limit_report(recs)
        assert rep.k == 0
        assert rep.skipped == (5, 15)
        counted = [row for row in rep.rows if row.counted]
        assert [row.n for row in counted] == [3, 7]
        assert rep.passed is True  # counted rows are exactly zero

    def test_additive_no_target(self):
        cv = from_cubic(0, 0, 3)  # disc -243, additive at 3
        recs = convergence_sequence(cv, 3, [3, 5, 7])
        rep = limit_report(recs)
        assert rep.k is None and rep.passed is None
        assert all(row.within is None for row in rep.rows)

    def test_too_few_records(self):
        with pytest.raises(ValueError):
            limit_report(convergence_sequence(K1, 3, [3, 5]))

    def test_mixed_primes_rejected(self):
        recs = convergence_sequence(K1, 3, [3, 5, 7]) + convergence_sequence(
            K1, 5, [3, 5, 7]
        )
        with pytest.raises(ValueError):
            limit_report(recs)


class TestRows:
    def test_row_fields(self):
        rows = records_as_rows(convergence_sequence(K1, 3, [3, 5]))
        assert rows[0] == {
            "n": 3,
            "value": 4,
            "ratio_num": 4,
            "ratio_den": 9,
            "k": 1,
            "abs_error": Fraction(5, 9),
        }

    def test_record_validation(self):
        with pytest.raises(ValueError):
            IntersectionRecord(p=3, n=3, value=-1, ratio=Fraction(-1, 9), k_target=1)
        with pytest.raises(ValueError):
            IntersectionRecord(p=3, n=3, value=4, ratio=Fraction(1, 2), k_target=1)
