from fractions import Fraction

import mpmath
import pytest

from oracles import beta_log_derivative_at_0, legendre, zeta_log_derivative_at_2
from unitary_heights.numberfield import (INERT, RAMIFIED, SPLIT, FieldData, FieldError,
                                         LExpression, LocalPlaceData, LSeriesValue, LSymbol,
                                         MissingInputError, c3_partial_fraction_form, c3_value,
                                         constant_c, euler_factor, euler_tail_bound,
                                         functional_equation_shift, local_log_derivative,
                                         log_derivative_L, log_derivative_direct,
                                         shift_expression)
from unitary_heights.symbolic_values import RationalFunctionX, SymbolicValue, rf_eval_at

LOG2 = SymbolicValue.log_of(2)
QI = FieldData.rational(-1)


class TestPlaces:
    @pytest.mark.parametrize("p,kind", [(5, SPLIT), (2, RAMIFIED), (3, INERT)])
    def test_gaussian_splitting(self, p, kind):
        (v,) = QI.splitting_of(p)
        assert (v.splitting, v.N, v.e) == (kind, p, 0)

    @pytest.mark.parametrize("p", [7, 11, 13, 17, 19, 23, 29, 31, 37, 41])
    def test_imaginary_quadratic_legendre(self, p):
        fd = FieldData.rational(-7)
        (v,) = fd.splitting_of(p)
        expected = {1: SPLIT, -1: INERT, 0: RAMIFIED}[legendre(-7, p)]
        assert v.splitting == expected

    def test_ramified_over_ramified_rejected(self):
        with pytest.raises(FieldError):
            LocalPlaceData(3, RAMIFIED, 1)
        assert LocalPlaceData(3, RAMIFIED, 1, allow_ramified_different=True).e == 1

    def test_prime_power_required(self):
        with pytest.raises(FieldError):
            LocalPlaceData(6, SPLIT)
        assert LocalPlaceData(9, INERT).p == 3

    def test_real_quadratic_invariants(self):
        fd = FieldData.real_quadratic(5, -1)
        assert (fd.degree, fd.disc_F, fd.disc_rel_norm) == (2, 5, 16)
        assert any("ramified above 2" in a for a in fd.hypotheses_report())

    def test_rejects_non_cm(self):
        with pytest.raises(FieldError):
            FieldData.real_quadratic(5, 2)
        with pytest.raises(FieldError):
            FieldData.real_quadratic(1, -1)
        with pytest.raises(FieldError):
            FieldData.rational(3)


class TestEulerFactors:
    def test_split(self):
        f = euler_factor(LocalPlaceData(5, SPLIT), 1)
        assert f == 1 / (1 - RationalFunctionX.x(5))

    def test_inert_odd(self):
        f = euler_factor(LocalPlaceData(3, INERT), 1)
        assert f == 1 / (1 + RationalFunctionX.x(3))
        assert rf_eval_at(f, 0) == rf_eval_at(RationalFunctionX.constant(Fraction(1, 2), 3), 0)

    def test_ramified_odd(self):
        assert euler_factor(LocalPlaceData(3, RAMIFIED), 1) == RationalFunctionX.constant(1, 3)

    def test_inert_log_derivative(self):
        # log N * N^{-s} / (1 + N^{-s}) with the sign of L'/L
        v = local_log_derivative(LocalPlaceData(3, INERT), 1, 1)
        assert v == SymbolicValue.log_of(3) * Fraction(1, 4)


class TestLSeries:
    def test_zeta_at_two_against_euler_maclaurin(self):
        ref = zeta_log_derivative_at_2()
        v = log_derivative_L(QI, 2, 0, prime_bound=10 ** 6)
        assert abs(v.value - ref) <= v.tail_bound
        assert v.rigorous

    def test_tail_bounds_shrink(self):
        bounds = [log_derivative_L(QI, 2, 0, prime_bound=B).tail_bound for B in (10 ** 4, 10 ** 5, 10 ** 6)]
        assert bounds[0] > bounds[1] > bounds[2]
        assert euler_tail_bound(1, 1, 100) == float("inf")

    def test_large_s_dominant_term(self):
        # 3 is the least unramified prime and eta(3) = -1: leading term +log 3 * 3^{-s}
        v = log_derivative_L(QI, 30, 1, prime_bound=1000)
        lead = mpmath.log(3) * mpmath.mpf(3) ** -30
        assert abs(v.value / lead - 1) < 1e-3

    def test_s_one_against_direct(self):
        v = log_derivative_L(QI, 1, 1)
        # Kronecker limit formula for chi_{-4}
        with mpmath.workdps(30):
            ref = (mpmath.euler + 2 * mpmath.log(2) + 3 * mpmath.log(mpmath.pi)
                   - 4 * mpmath.log(mpmath.gamma(0.25)))
        assert abs(v.value - ref) < 1e-12

    def test_functional_equation_route_to_zero(self):
        at_one = log_derivative_L(QI, 1, 1)
        shifted = functional_equation_shift(QI, 0, at_one)
        assert abs(shifted.numeric - beta_log_derivative_at_0()) < 1e-11
        assert abs(log_derivative_direct(QI, 0, 1) - beta_log_derivative_at_0()) < 1e-12

    @pytest.mark.parametrize("fd", [FieldData.rational(-3), FieldData.real_quadratic(5, -1),
                                    FieldData.real_quadratic(2, -3)])
    def test_functional_equation_against_direct(self, fd):
        for n in (0, 1, 2):
            at = log_derivative_L(fd, n + 1, n + 1, method="dirichlet", precision=20)
            shifted = functional_equation_shift(fd, n, at, precision=20)
            direct = log_derivative_direct(fd, -n, n + 1)
            assert abs(shifted.numeric - direct) < 1e-12

    def test_omit_conductor_off_by_conductor(self):
        fd = FieldData.real_quadratic(5, -1)
        at = log_derivative_L(fd, 1, 1)
        a = functional_equation_shift(fd, 0, at)
        b = functional_equation_shift(fd, 0, at, omit_conductor=True)
        assert abs((b.numeric - a.numeric) - mpmath.log(16)) < 1e-12

    def test_shift_is_involution(self):
        fd = FieldData.rational(-3)
        v = LSeriesValue(mpmath.mpf("0.25"), 1e-9, True)
        once = functional_equation_shift(fd, 1, v).as_lseries()
        twice = functional_equation_shift(fd, 1, once)
        assert abs(twice.numeric - v.value) < 1e-20

    def test_table_mode_needs_euler(self):
        fd = FieldData.from_table(1, 1, 4, [LocalPlaceData(2, RAMIFIED), LocalPlaceData(3, INERT),
                                            LocalPlaceData(5, SPLIT)])
        v = log_derivative_L(fd, 2, 0, prime_bound=10 ** 6)
        assert v.rigorous and v.tail_bound > 0.1   # only three tabulated places
        with pytest.raises(FieldError):
            log_derivative_L(fd, 1, 1, method="dirichlet")


class TestLExpression:
    def test_substitution(self):
        e = LExpression.symbol(0, 1, 3) + LExpression(LOG2)
        out = e.substitute(LSymbol(0, 1), shift_expression(QI, 0))
        assert LSymbol(0, 1) not in out.l_terms
        assert out.l_terms[LSymbol(1, 1)] == -3

    def test_zero(self):
        e = LExpression.symbol(2, 0, 2)
        assert (e - e).is_zero()


class TestConstants:
    def test_c3(self):
        assert c3_value(1) == SymbolicValue.rational(Fraction(-1, 2)) - LOG2
        assert c3_value(2) == SymbolicValue.rational(Fraction(1, 4)) - LOG2

    def test_c3_partial_fractions(self):
        for n in range(1, 51):
            assert c3_value(n) == c3_partial_fraction_form(n)

    def test_archimedean_comparison(self):
        expr, value = constant_c("archimedean-comparison", QI, 1)
        expected = (SymbolicValue.rational(-1) + SymbolicValue.euler_gamma() + LOG2 * 2
                    + SymbolicValue.log_pi())
        assert expr.constant == expected and not expr.l_terms
        assert value is not None

    def test_c1_symbolic_then_numeric(self):
        expr, value = constant_c("c1", QI, 1)
        assert value is None
        _, value = constant_c("c1", QI, 1, {"L0": mpmath.mpf(1)})
        # 2 * 1 + log(d_{E/F}/d_F) with d_{E/F} = 4
        assert abs(value - (2 + mpmath.log(4))) < 1e-12

    def test_missing_input(self):
        with pytest.raises(MissingInputError):
            constant_c("c4-partial", QI, 2, {"L0": mpmath.mpf(1)})
