from fractions import Fraction

import mpmath
import pytest

from holoreduce import (
    CongruenceFixture,
    IdentityFixture,
    Polynomial,
    ShiftOperator,
    check_telescoping,
    fixtures_dir,
    get_sequence,
    load_fixture,
    numeric_series_check,
    rational_reduce,
    rederive,
    sp_expand,
    verify_congruence,
    verify_identity_exact,
)
from holoreduce.errors import (
    DomainViolation,
    MismatchedSequence,
    NonInvertibleDenominator,
    PrimeFilterViolation,
)
from holoreduce.verify import _parse_target, first_valid_index

from conftest import N

ALL_PRIMES = [7, 13, 19, 31, 37, 43]


def fixture(name):
    return load_fixture(str(fixtures_dir() / f"{name}.fixture"))


def derived_scaled_sequence():
    """Domb(n)/(16^n n(n-1)) from n = 2 with its derived annihilator."""
    base = get_sequence("domb_over_16n")
    op = ShiftOperator([
        2 * (N - 1) * N * (N + 1) ** 2,
        -N * (3 + 2 * N) * (12 + 15 * N + 5 * N**2),
        8 * (2 + N) ** 4,
    ])
    from holoreduce import HolonomicSequence

    return HolonomicSequence(
        op, 2,
        [base.eval(2) / 2, base.eval(3) / 6],
        name="domb_over_16n_scaled",
        oracle=lambda m: base.eval(m) / (m * (m - 1)),
    ), op


class TestTelescoping:
    def test_scaled_16n_boundary_value(self):
        seq, op = derived_scaled_sequence()
        assert check_telescoping(seq, op, Polynomial([1]), (2, 7))
        # closed boundary value for the window [2, p]: the constant 5 plus
        # two p^2-divisible tail terms (both vanish mod p^2)
        p = 7
        us = op.certificate(Polynomial([1]))

        def boundary(m):
            return sum(u.evaluate(m) * seq.eval(m + i)
                       for i, u in enumerate(us))

        value = boundary(2) - boundary(p)
        gp = seq.eval
        assert value == 5 + 2 * p**2 * (2 - 3 * p + p**2) * gp(p - 1) \
            - 8 * p**4 * gp(p)
        num, den = value.numerator, value.denominator
        assert num * pow(den, -1, p**2) % p**2 == 5

    def test_empty_window(self):
        seq, op = derived_scaled_sequence()
        assert check_telescoping(seq, op, Polynomial([1]), (4, 4))

    def test_franel_window_against_direct_sums(self):
        seq = get_sequence("franel_example22")
        op = seq.operator
        x = Polynomial([1])  # recovers the summable multiple 2 - 3n
        assert op.adjoint_apply(x) == 2 - 3 * N
        assert check_telescoping(seq, op, x, (2, 30))
        # independent oracle: accumulate the summand directly
        us = op.certificate(x)
        image = op.adjoint_apply(x)
        direct = sum(image.evaluate(m) * seq.eval(m) for m in range(2, 30))
        by_parts = sum(u.evaluate(2) * seq.eval(2 + i)
                       for i, u in enumerate(us)) \
            - sum(u.evaluate(30) * seq.eval(30 + i)
                  for i, u in enumerate(us))
        assert direct == by_parts

    def test_domain_violation(self):
        seq = get_sequence("franel_example22")
        with pytest.raises(DomainViolation):
            check_telescoping(seq, seq.operator, Polynomial([1]), (0, 5))

    def test_scale_invariance(self, rng):
        seq = get_sequence("domb_over_neg32n")
        x = Polynomial([2, 1])
        for c in (Fraction(3), Fraction(-5, 7)):
            assert check_telescoping(seq, seq.operator, x, (0, 40)) == \
                check_telescoping(seq, seq.operator, c * x, (0, 40))


class TestIdentityExact:
    def test_domb_neg32_upper_sq_against_source(self):
        fix = fixture("domb_neg32_upper_sq")
        source = fixture("domb_neg32_base")
        rr = rederive(fix, source)
        assert verify_identity_exact(fix, source, rr, window_length=100)

    def test_source_against_itself_trivially(self):
        source = fixture("domb_neg32_base")
        seq = get_sequence(source.sequence_key)
        rr = rational_reduce(source.numer, seq.operator, Polynomial([1]),
                             "upper", 2)
        # degree 1 < deg L: nothing reduces, zero certificate
        assert rr.reduction.multiplier.is_zero()
        fix = IdentityFixture(
            sequence_key=source.sequence_key,
            numer=rr.remainder_numer,
            denom=Polynomial([1]),
            start_index=0,
            target_r0=Fraction(0),
            target_r1=Fraction(2),
        )
        assert verify_identity_exact(fix, source, rr, window_length=60)

    def test_domb_neg32_lower_sq_offset_bookkeeping(self):
        fix = fixture("domb_neg32_lower_sq")
        source = fixture("domb_neg32_base")
        rr = rederive(fix, source)
        assert first_valid_index(fix, rr) == 2
        assert verify_identity_exact(fix, source, rr, window_length=100)

    def test_mismatched_sequence(self):
        fix = fixture("domb_neg32_upper_sq")
        source = IdentityFixture(
            sequence_key="franel", numer=3 * N + 1, denom=Polynomial([1]),
            start_index=0, target_r0=Fraction(0), target_r1=Fraction(0),
        )
        rr = rederive(fix, None)
        with pytest.raises(MismatchedSequence):
            verify_identity_exact(fix, source, rr)

    def test_detects_wrong_numerator(self):
        fix = fixture("domb_neg32_upper_sq")
        source = fixture("domb_neg32_base")
        rr = rederive(fix, source)
        broken = IdentityFixture(
            sequence_key=fix.sequence_key,
            numer=fix.numer + 1,
            denom=fix.denom,
            start_index=fix.start_index,
            target_r0=fix.target_r0,
            target_r1=fix.target_r1,
            recipe=fix.recipe,
        )
        assert not verify_identity_exact(broken, source, rr)


class TestNumeric:
    def test_base_series_with_averaging(self):
        report = numeric_series_check(fixture("domb_neg32_base"), 3000)
        assert report["abs_error"] < 1e-4

    def test_leibniz_tail_bound(self):
        # exact partial sums: the truncation error of an alternating series
        # with decreasing magnitudes is at most the first omitted term
        fix = fixture("domb_neg32_base")
        seq = get_sequence(fix.sequence_key)
        exact = sum(
            (fix.numer.evaluate(m) * seq.eval(m) for m in range(100)),
            Fraction(0),
        )
        omitted = abs(fix.numer.evaluate(100) * seq.eval(100))
        with mpmath.workprec(300):
            target = 2 / mpmath.pi
            err = abs(mpmath.mpf(exact.numerator) / exact.denominator - target)
            assert err <= mpmath.mpf(omitted.numerator) / omitted.denominator
        report = numeric_series_check(fix, 100, accel="none", precision=300)
        with mpmath.workprec(300):
            assert report["abs_error"] <= \
                mpmath.mpf(omitted.numerator) / omitted.denominator

    def test_minimum_terms(self):
        with pytest.raises(ValueError):
            numeric_series_check(fixture("domb_neg32_upper_sq"), 50)

    def test_exact_numeric_coherence(self):
        fix = fixture("domb_neg32_upper_sq")
        seq = get_sequence(fix.sequence_key)
        n_terms = 1000
        exact = Fraction(0)
        for m in range(n_terms):
            exact += fix.numer.evaluate(m) / fix.denom.evaluate(m) * seq.eval(m)
        report = numeric_series_check(fix, n_terms, accel="none")
        with mpmath.workprec(96):
            exact_mpf = mpmath.mpf(exact.numerator) / exact.denominator
            rel = abs(report["value"] - exact_mpf) / abs(exact_mpf)
            assert rel < mpmath.mpf(2) ** -50

    def test_bracket_refinement(self):
        fix = fixture("domb_neg32_upper_sq_order3")
        small = numeric_series_check(fix, 300)
        large = numeric_series_check(fix, 600)
        assert large["abs_error"] <= small["abs_error"] + 1e-6

    def test_precision_env_var(self, monkeypatch):
        monkeypatch.setenv("HOLOREDUCE_PRECISION_BITS", "150")
        report = numeric_series_check(fixture("domb_neg32_base"), 200)
        assert report["precision_bits"] == 150
        monkeypatch.setenv("HOLOREDUCE_PRECISION_BITS", "junk")
        report = numeric_series_check(fixture("domb_neg32_base"), 200)
        assert report["precision_bits"] == 96


class TestCongruence:
    def test_linear_sum_vanishes(self):
        reports = verify_congruence(fixture("domb_16n_linear_cong"), ALL_PRIMES)
        assert [r["prime"] for r in reports] == ALL_PRIMES
        assert all(r["residue"] == 0 and r["ok"] for r in reports)

    def test_rational_sum_is_three_halves(self):
        reports = verify_congruence(fixture("domb_16n_rational_cong"), ALL_PRIMES)
        for r in reports:
            assert r["ok"]
            assert r["residue"] == (3 * pow(2, -1, r["modulus"])) % r["modulus"]

    def test_empty_sum(self):
        fix = CongruenceFixture(
            sequence_key="domb_over_16n", numer=Polynomial([1]),
            denom=Polynomial([1]), start_index=100, target=Fraction(0),
        )
        reports = verify_congruence(fix, [7])
        assert reports[0]["residue"] == 0 and reports[0]["ok"]

    def test_prime_filter(self):
        with pytest.raises(PrimeFilterViolation):
            verify_congruence(fixture("domb_16n_linear_cong"), [5])
        with pytest.raises(PrimeFilterViolation):
            verify_congruence(fixture("domb_16n_linear_cong"), [49])

    def test_noninvertible_denominator(self):
        fix = CongruenceFixture(
            sequence_key="domb_over_16n", numer=Polynomial([1]),
            denom=N + 7, start_index=0, target=Fraction(0),
        )
        with pytest.raises(NonInvertibleDenominator):
            verify_congruence(fix, [7])

    def test_pipeline_consistency(self):
        # the rational congruence equals (5 + linear sum from n=2)/2 mod p^2
        seq = get_sequence("domb_over_16n")
        for p in ALL_PRIMES:
            modulus = p * p

            def residue(q):
                return q.numerator * pow(q.denominator, -1, modulus) % modulus

            direct = sum(
                residue((m + 1) ** 2 * seq.eval(m) / (m * (m - 1)))
                for m in range(2, p)
            ) % modulus
            linear = sum(
                residue((3 * m + 1) * seq.eval(m)) for m in range(2, p)
            ) % modulus
            assert direct == (5 + linear) * pow(2, -1, modulus) % modulus


class TestFixtureFiles:
    def test_all_fixtures_load(self):
        labels = set()
        for name in ("domb_neg32_base", "domb_neg32_upper_sq", "domb_neg32_upper_cube", "domb_neg32_lower_sq", "domb_neg32_lower_cube", "domb_neg32_upper_sq_order3",
                     "domb_16n_linear_cong", "domb_16n_rational_cong"):
            fix = fixture(name)
            labels.add(fix.label)
        assert len(labels) == 8

    def test_identity_targets(self):
        assert _parse_target("0 + 2/pi") == ("identity", 0, 2)
        assert _parse_target("80 - 162/pi") == ("identity", 80, -162)
        assert _parse_target("-217/8 + 162/pi") == \
            ("identity", Fraction(-217, 8), 162)
        assert _parse_target("33/4 - 18/pi") == \
            ("identity", Fraction(33, 4), -18)

    def test_congruence_targets(self):
        assert _parse_target("0 mod p^2") == ("congruence", 0)
        assert _parse_target("3/2 mod p^2") == ("congruence", Fraction(3, 2))

    def test_bad_target(self):
        with pytest.raises(ValueError):
            _parse_target("2*zeta(3)")

    def test_domb_neg32_lower_sq_metadata(self):
        fix = fixture("domb_neg32_lower_sq")
        assert fix.start_index == 2
        assert fix.target_r0 == Fraction(33, 4)
        assert fix.target_r1 == -18
        assert fix.recipe.scalar == Fraction(-1, 9)
        assert fix.denom == N**2 * (N - 1) ** 2
