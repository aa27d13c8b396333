from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, strategies as st

from unitary_heights.symbolic_values import (PoleError, RationalFunctionX, SymbolicValue, Surd,
                                             rf_derivative_at_s0, rf_eval_at, rf_eval_numeric,
                                             sv_combine, sv_to_numeric)

LOG2 = SymbolicValue.log_of(2)
LOG3 = SymbolicValue.log_of(3)


def rf(num, den, N):
    return RationalFunctionX([Fraction(c) for c in num], [Fraction(c) for c in den], N)


class TestEvaluation:
    def test_linear_at_zero(self):
        assert rf_eval_at(rf([1, Fraction(-1, 4)], [1], 2), 0) == Surd(Fraction(3, 4))

    def test_telescoping_quotient(self):
        f = rf([1, 0, Fraction(-1, 9)], [1, Fraction(-1, 3)], 3)
        assert rf_eval_at(f, 0) == Surd(Fraction(4, 3))

    def test_split_closed_form_at_one(self):
        assert rf_eval_at(rf([1, Fraction(-1, 4)], [1], 2), 1) == Surd(Fraction(7, 8))

    def test_pole(self):
        with pytest.raises(PoleError):
            rf_eval_at(rf([1], [1, -1], 2), 0)

    def test_numeric_matches_exact(self):
        f = rf([1, Fraction(-1, 9)], [1, Fraction(1, 3)], 3)
        with mpmath.workdps(30):
            ref = (1 - mpmath.mpf(3) ** -2.5) / (1 + mpmath.mpf(3) ** -1.5)
            assert abs(rf_eval_numeric(f, Fraction(1, 2)) - ref) < 1e-25


class TestDerivative:
    def test_split_example(self):
        assert rf_derivative_at_s0(rf([1, Fraction(-1, 4)], [1], 2)) == LOG2 * Fraction(1, 4)

    def test_constant(self):
        assert rf_derivative_at_s0(RationalFunctionX.constant(5, 3)).is_zero()

    def test_chain_rule(self):
        # N^{-(r+1)(s+n)} with N=3, r=1, n=1 is X^2 / 9
        f = RationalFunctionX.monomial(Fraction(1, 9), 2, 3)
        assert rf_derivative_at_s0(f) == LOG3 * Fraction(-2, 9)

    @given(st.integers(2, 7), st.integers(0, 4), st.fractions(-3, 3, max_denominator=5))
    def test_monomial_rule(self, N, k, c):
        # d/ds c X^k at s = 0 is -k c log N
        f = RationalFunctionX.monomial(c, k, N)
        assert rf_derivative_at_s0(f) == SymbolicValue.log_of(N) * (-k * c)

    def test_matches_numeric_difference(self):
        f = rf([1, Fraction(-1, 8)], [1, Fraction(1, 2)], 2)
        h = mpmath.mpf("1e-12")
        with mpmath.workdps(40):
            fd = (rf_eval_numeric(f, h, 40) - rf_eval_numeric(f, -h, 40)) / (2 * h)
        assert abs(fd - sv_to_numeric(rf_derivative_at_s0(f), 20)) < 1e-15


class TestSymbolicValue:
    def test_cancellation(self):
        assert sv_combine([LOG2, LOG2], [1, -1]).is_zero()

    def test_gamma_plus_log_pi(self):
        v = sv_combine([SymbolicValue.euler_gamma(), SymbolicValue.log_pi()], [1, 1])
        assert v == SymbolicValue.euler_gamma() + SymbolicValue.log_pi()

    def test_three_term_cancellation(self):
        half = Fraction(1, 2)
        v = sv_combine([LOG2 * half, SymbolicValue.log_pi() * half, LOG2 * half], [2, 2, -2])
        assert v == SymbolicValue.log_pi()

    def test_log_factorisation(self):
        assert SymbolicValue.log_of(12) == LOG2 * 2 + LOG3
        assert SymbolicValue.log_of(Fraction(1, 4)) == LOG2 * -2

    def test_numeric_values(self):
        assert mpmath.nstr(sv_to_numeric(LOG2, 10), 10) == "0.6931471806"
        assert mpmath.nstr(sv_to_numeric(SymbolicValue.euler_gamma(), 10), 10) == "0.5772156649"
        assert sv_to_numeric(SymbolicValue(), 10) == 0

    def test_surd_coefficients(self):
        v = LOG3 * Surd.power(3, -1)
        with mpmath.workdps(30):
            assert abs(sv_to_numeric(v, 20) - mpmath.log(3) / mpmath.sqrt(3)) < 1e-18


class TestSurd:
    def test_power_halves(self):
        assert Surd.power(3, -1) * Surd.power(3, -1) == Surd(Fraction(1, 3))
        assert Surd.power(4, 1) == Surd(2)

    @given(st.integers(2, 11), st.integers(-6, 6), st.integers(-6, 6))
    def test_power_law(self, N, a, b):
        assert Surd.power(N, a) * Surd.power(N, b) == Surd.power(N, a + b)

    def test_mixed_roots_add(self):
        s = Surd.power(2, 1) + Surd.power(3, 1)
        with mpmath.workdps(30):
            assert abs(s.to_mpf(20) - (mpmath.sqrt(2) + mpmath.sqrt(3))) < 1e-18
