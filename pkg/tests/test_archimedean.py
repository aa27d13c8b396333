from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings, strategies as st

from oracles import ei_series, harmonic
from unitary_heights.archimedean import (LOG_SINGULARITY_MULTIPLE, ArchDomainError, ArchWhittakerSpec,
                                         EighthRoot, derivative_bracket, ei_quadrature,
                                         exp_integral_ei, green_difference_constant,
                                         green_error_coefficient, green_kernel_q,
                                         green_ode_residual, integral_via_q, k_arch_value,
                                         k_integral, k_integral_via_q, log_singularity_multiple,
                                         projection_constant_check, weil_index, whittaker_arch)
from unitary_heights.numberfield import DivergenceError
from unitary_heights.symbolic_values import SymbolicValue



@pytest.fixture(autouse=True)
def _precision():
    with mpmath.workdps(30):
        yield


class TestEi:
    def test_minus_one(self):
        assert abs(exp_integral_ei(-1) - mpmath.mpf("-0.219383934395520273677")) < 1e-15
        assert abs(exp_integral_ei(-1) - ei_quadrature(-1)) < 1e-9

    def test_minus_ten(self):
        assert abs(exp_integral_ei(-10) / mpmath.mpf("-4.15697e-6") - 1) < 1e-5

    @pytest.mark.parametrize("x", [-20, -5, -1.5, -0.3, -1e-3, 0.5, 2, 7])
    def test_against_series(self, x):
        assert abs(exp_integral_ei(x) - ei_series(x)) < 1e-20 * max(1, abs(ei_series(x)))

    def test_small_argument_limit(self):
        for x in (-1e-4, -1e-6, -1e-8):
            assert abs(exp_integral_ei(x) - mpmath.euler - mpmath.log(-x)) < 2 * abs(x)

    def test_zero(self):
        with pytest.raises(ArchDomainError):
            exp_integral_ei(0)


class TestWhittaker:
    def test_value_n1(self):
        w = whittaker_arch(ArchWhittakerSpec(1, 1))
        assert w.phase == EighthRoot(4)
        assert abs(w.to_complex() + 0.0737236) < 1e-6
        assert abs(w.magnitude - (2 * mpmath.pi) ** 2 * mpmath.exp(-2 * mpmath.pi)) < 1e-25

    def test_nonpositive(self):
        assert whittaker_arch(ArchWhittakerSpec(2, 0)).magnitude == 0
        assert whittaker_arch(ArchWhittakerSpec(2, -1.5), derivative=True).magnitude == 0

    def test_bracket_n1(self):
        expected = 1 / (4 * mpmath.pi) + mpmath.log(mpmath.pi) + mpmath.euler - 1
        assert abs(derivative_bracket(1, 1) - expected) < 1e-25

    def test_weil_index(self):
        assert weil_index(1) == EighthRoot(4)
        assert weil_index(3) == EighthRoot(0)
        assert abs(weil_index(2).to_complex() + 1j) < 1e-15

    def test_derivative_scaling(self):
        # W'/W = (1/2) bracket for the shared prefactor
        for n in (1, 2, 3):
            w = whittaker_arch(ArchWhittakerSpec(n, 0.7))
            d = whittaker_arch(ArchWhittakerSpec(n, 0.7), derivative=True)
            ratio = d.magnitude / w.magnitude
            assert abs(ratio - derivative_bracket(n, 0.7) / 2) < 1e-20


class TestGreenKernel:
    def test_q0_closed_form(self):
        assert abs(green_kernel_q(0, 1, 2) - mpmath.log(2) / 2) < 1e-10
        for t in map(mpmath.mpf, ("1.1", 3, 10)):
            assert abs(green_kernel_q(0, 1, t) - mpmath.log(t / (t - 1)) / 2) < 1e-20

    def test_truncated_series_converges(self):
        full = green_kernel_q(0.5, 2, 3)
        assert abs(green_kernel_q(0.5, 2, 3, terms=200) - full) < 1e-25

    def test_large_t_asymptotics(self):
        s, n, t = 0.5, 2, 1e6
        lead = mpmath.gamma(s + n) * mpmath.gamma(s + 1) / (2 * mpmath.gamma(2 * s + n + 1) * t ** (s + n))
        assert abs(green_kernel_q(s, n, t) / lead - 1) < 1e-5

    def test_ode_examples(self):
        assert abs(green_ode_residual(0, 1, 3, 1e-4)) < 1e-6
        assert abs(green_ode_residual(0.5, 2, 2.5, 1e-4)) < 1e-5

    def test_ode_second_order(self):
        r1 = green_ode_residual(0.5, 2, 2.5, 1e-3)
        r2 = green_ode_residual(0.5, 2, 2.5, 5e-4)
        assert 3.5 < r1 / r2 < 4.5

    @settings(max_examples=20, deadline=None)
    @given(st.sampled_from([0, 0.5, 1, 2]), st.integers(1, 4))
    def test_log_singularity_multiple(self, s, n):
        assert abs(log_singularity_multiple(s, n) - float(LOG_SINGULARITY_MULTIPLE)) < 1e-6

    def test_domain(self):
        with pytest.raises(ArchDomainError):
            green_kernel_q(0, 1, 1)


class TestKIntegral:
    @pytest.mark.parametrize("n", [1, 2, 3])
    @pytest.mark.parametrize("q", [-0.5, -1, -5])
    def test_corrected_relation(self, n, q):
        assert abs(k_integral(0, n, q) - k_integral_via_q(n, q)) < 1e-20

    @pytest.mark.parametrize("q", [-0.5, -1, -5])
    def test_printed_relation_off_by_n(self, q):
        # the printed coefficient is n times the exact one at s = 0
        n = 2
        assert abs(k_integral_via_q(n, q, literal=True) / k_integral(0, n, q) - n) < 1e-20

    def test_integral_at_zero(self):
        n, q = 3, mpmath.mpf("-1.5")
        direct = mpmath.quad(lambda t: 1 / (t * (1 - q * t) ** n), [1, mpmath.inf])
        assert abs(integral_via_q(0, n, q) - direct) < 1e-20

    def test_divergent(self):
        with pytest.raises(DivergenceError):
            k_integral(0, 1, 0.5)

    def test_k_arch(self):
        v = k_arch_value(0.3, -0.2)
        assert abs(v + mpmath.exp(-0.6 * mpmath.pi) * exp_integral_ei(-0.8 * mpmath.pi) / 2) < 1e-25
        assert v > 0


class TestConstants:
    def test_c3_examples(self):
        log2 = SymbolicValue.log_of(2)
        ok, lhs, rhs = projection_constant_check(1)
        assert ok and rhs == SymbolicValue.rational(Fraction(-1, 2)) - log2
        ok, _, rhs = projection_constant_check(3)
        assert ok and rhs == SymbolicValue.rational(Fraction(7, 12)) - log2

    def test_c3_range(self):
        assert all(projection_constant_check(n)[0] for n in range(1, 51))

    def test_digamma_harmonic(self):
        for n in range(1, 15):
            h = harmonic(n)
            assert abs(mpmath.digamma(n + 1) - (mpmath.mpf(h.numerator) / h.denominator - mpmath.euler)) < 1e-25

    def test_green_constants(self):
        assert green_difference_constant(4) == Fraction(-1, 8)
        assert green_error_coefficient(2, 3) == Fraction(-2, 3)
