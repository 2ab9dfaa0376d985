import random
from fractions import Fraction

import pytest

from holoreduce import (
    Polynomial,
    ShiftOperator,
    degree_law_check,
    degree_profile,
    gcd_condition,
    poly_gcd,
    summable_degree_bounds,
)
from holoreduce.errors import OrderZero, ZeroInput, ZeroOperator
from holoreduce.sequences import (
    CENTRAL_BINOMIAL_OPERATOR,
    DOMB_16N_OPERATOR,
    DOMB_NEG32N_OPERATOR,
    FRANEL_SIGNED_OPERATOR,
    HARMONIC_RATIO_OPERATOR,
    catalog,
)

from conftest import N, rand_operator, rand_polynomial

DELTA = ShiftOperator([Polynomial([-1]), Polynomial([1])])


def adjoint_oracle(op, x, m):
    """Pointwise adjoint value sum_i a_i(m-i) x(m-i), independent route."""
    return sum(
        (op.coefficient(i).evaluate(m - i) * x.evaluate(m - i)
         for i in range(op.order + 1)),
        Fraction(0),
    )


class TestAdjoint:
    def test_harmonic_kills_constants(self):
        assert HARMONIC_RATIO_OPERATOR.adjoint_apply(Polynomial([1])).is_zero()

    def test_harmonic_on_n(self):
        image = HARMONIC_RATIO_OPERATOR.adjoint_apply(N)
        for m in range(-6, 7):
            assert image.evaluate(m) == adjoint_oracle(HARMONIC_RATIO_OPERATOR, N, m)
        assert image == N**2 + N

    def test_zero_input(self, rng):
        op = rand_operator(rng)
        assert op.adjoint_apply(Polynomial()).is_zero()

    def test_linearity(self, rng):
        for _ in range(30):
            op = rand_operator(rng)
            x = rand_polynomial(rng, 4)
            y = rand_polynomial(rng, 4)
            a = Fraction(rng.randint(-9, 9), rng.randint(1, 9))
            b = Fraction(rng.randint(-9, 9), rng.randint(1, 9))
            assert op.adjoint_apply(a * x + b * y) == \
                a * op.adjoint_apply(x) + b * op.adjoint_apply(y)


class TestCertificates:
    def test_derived_domb_operator_units(self):
        # order-2 operator annihilating Domb(n)/(16^n n(n-1))
        left = ShiftOperator([
            2 * (N - 1) * N * (N + 1) ** 2,
            -N * (3 + 2 * N) * (12 + 15 * N + 5 * N**2),
            8 * (2 + N) ** 4,
        ])
        u0, u1 = left.certificate(Polynomial([1]))
        assert u0 == Polynomial([2, 7, 6, -5, -2])
        assert u1 == 8 * (1 + N) ** 4

    def test_zero_multiplier(self, rng):
        op = rand_operator(rng)
        assert all(u.is_zero() for u in op.certificate(Polynomial()))

    def test_franel_signed_units(self):
        u0, u1 = FRANEL_SIGNED_OPERATOR.certificate(Polynomial([1]))
        assert -u0 == 8 * N**3 - 5 * N - 2
        assert -u1 == (N + 1) ** 3

    def test_order_zero_rejected(self):
        with pytest.raises(OrderZero):
            ShiftOperator([N + 1]).certificate(Polynomial([1]))

    def test_certificate_identity_on_catalog(self, rng):
        # L*(x)(n) F(n) telescopes: equals U(n) - U(n+1) pointwise
        for entry in catalog():
            seq = entry.sequence
            if seq.operator is None:
                continue
            for x in (Polynomial([1]), rand_polynomial(rng, 4, height=4)):
                image = seq.operator.adjoint_apply(x)
                us = seq.operator.certificate(x)

                def boundary(m):
                    return sum(
                        (u.evaluate(m) * seq.eval(m + i)
                         for i, u in enumerate(us)),
                        Fraction(0),
                    )

                for m in range(seq.start_index, seq.start_index + 100):
                    assert image.evaluate(m) * seq.eval(m) == \
                        boundary(m) - boundary(m + 1)


class TestDegreeProfile:
    def test_franel_signed(self):
        prof = degree_profile(FRANEL_SIGNED_OPERATOR)
        assert (prof.deg_l, prof.c_l) == (2, 0)
        assert prof.degenerated and prof.r_l == {0}

    def test_harmonic_ratio(self):
        prof = degree_profile(HARMONIC_RATIO_OPERATOR)
        assert (prof.deg_l, prof.c_l) == (1, 1)
        assert prof.degenerated

    def test_central_binomial(self):
        prof = degree_profile(CENTRAL_BINOMIAL_OPERATOR)
        assert (prof.deg_l, prof.c_l) == (3, 0)

    def test_domb_16n(self):
        prof = degree_profile(DOMB_16N_OPERATOR)
        assert prof.deg_l == 2
        assert not prof.degenerated
        assert prof.d_l == 3
        assert not prof.strongly_nondegenerated

    def test_domb_neg32n_strong(self):
        prof = degree_profile(DOMB_NEG32N_OPERATOR)
        assert prof.deg_l == prof.d_l == 3
        assert prof.strongly_nondegenerated and not prof.degenerated

    def test_difference_operator(self):
        prof = degree_profile(DELTA)
        assert prof.deg_l == -1
        assert prof.c_l == 1
        assert prof.r_l == {0}

    def test_b0_is_adjoint_of_one(self, rng):
        for _ in range(30):
            op = rand_operator(rng)
            prof = degree_profile(op)
            assert prof.b_polys[0] == op.adjoint_apply(Polynomial([1]))

    def test_cl_brute_force_agreement(self, rng):
        for _ in range(60):
            op = rand_operator(rng)
            prof = degree_profile(op)
            # independent pointwise zero test for each candidate s
            for s in range(op.order + 1):
                x = Polynomial.monomial(s)
                probe = max(prof.d_l + op.order + s + 2, 4)
                vanish = all(adjoint_oracle(op, x, m) == 0
                             for m in range(probe))
                if s < prof.c_l:
                    assert vanish
                elif s == prof.c_l:
                    assert not vanish
                    break

    def test_f_poly_never_zero(self, rng):
        for _ in range(100):
            prof = degree_profile(rand_operator(rng))
            assert not prof.f_poly.is_zero()
            assert len(prof.r_l) <= len(prof.b_polys) - 1

    def test_nondegenerate_implies_zero_start(self, rng):
        seen = 0
        while seen < 200:
            prof = degree_profile(rand_operator(rng))
            if prof.degenerated:
                continue
            assert prof.c_l == 0
            seen += 1


class TestDegreeLaw:
    def test_harmonic_constant_drops(self):
        assert degree_law_check(HARMONIC_RATIO_OPERATOR, Polynomial([1])) == "<"

    def test_franel_constant_drops(self):
        # 0 lies in R_L, so L*(1) = 2 - 3n has degree 1 < 2 + 0
        assert degree_law_check(FRANEL_SIGNED_OPERATOR, Polynomial([1])) == "<"
        assert FRANEL_SIGNED_OPERATOR.adjoint_apply(Polynomial([1])).degree == 1

    def test_central_binomial_on_n(self):
        assert degree_law_check(CENTRAL_BINOMIAL_OPERATOR, N) == "="
        assert CENTRAL_BINOMIAL_OPERATOR.adjoint_apply(N).degree == 4

    def test_zero_input(self):
        with pytest.raises(ZeroInput):
            degree_law_check(DELTA, Polynomial())

    def test_random_law(self, rng):
        for _ in range(60):
            op = rand_operator(rng)
            x = rand_polynomial(rng, 5, nonzero=True)
            prof = degree_profile(op)
            tag = degree_law_check(op, x)
            expected = "<" if (prof.degenerated and x.degree in prof.r_l) else "="
            assert tag == expected


class TestGcdCondition:
    def test_harmonic_pair_coprime_for_all_shifts(self):
        assert gcd_condition(N * (N + 1) ** 2, (N + 2) ** 2 * (N + 3), 0)

    def test_equal_linear_collides_at_zero(self):
        assert not gcd_condition(N, N, 0)
        assert gcd_condition(N, N, 1)

    def test_separated_linear(self):
        assert gcd_condition(N, N + 5, 0)

    def test_zero_input(self):
        with pytest.raises(ZeroInput):
            gcd_condition(Polynomial(), N, 0)

    def test_against_brute_force(self, rng):
        for _ in range(200):
            a = rand_polynomial(rng, 3, height=5, nonzero=True)
            b = rand_polynomial(rng, 3, height=5, nonzero=True)
            brute = all(
                poly_gcd(a, b.shift(h)) == 1 for h in range(0, 51)
            ) if (a.degree > 0 and b.degree > 0) else True
            assert gcd_condition(a, b, 0) == brute


class TestSummableBounds:
    def test_franel_upper(self):
        bounds = summable_degree_bounds(FRANEL_SIGNED_OPERATOR)
        assert bounds.upper == 2
        assert not bounds.lower_valid

    def test_harmonic_two_sided(self):
        bounds = summable_degree_bounds(HARMONIC_RATIO_OPERATOR)
        assert bounds.upper == 2
        assert bounds.lower_valid and bounds.lower == 2
        assert bounds.witness == N**2 + N

    def test_central_binomial_upper(self):
        assert summable_degree_bounds(CENTRAL_BINOMIAL_OPERATOR).upper == 3

    def test_order_zero(self):
        with pytest.raises(OrderZero):
            summable_degree_bounds(ShiftOperator([N]))


class TestOperatorBasics:
    def test_trailing_zeros_trimmed(self):
        op = ShiftOperator([N, Polynomial([1]), Polynomial(), Polynomial()])
        assert op.order == 1

    def test_zero_operator_rejected(self):
        with pytest.raises(ZeroOperator):
            ShiftOperator([Polynomial(), Polynomial()])

    def test_primitive_normalization(self):
        op = ShiftOperator([N / 2, Polynomial([Fraction(-3, 4)])])
        prim = op.primitive()
        assert prim.coefficient(0) == -2 * N
        assert prim.coefficient(1) == 3

    def test_scalar_scaling(self, rng):
        op = rand_operator(rng)
        assert (op * 3).coefficient(0) == 3 * op.coefficient(0)
        with pytest.raises(ZeroOperator):
            op * 0
