"""Acceptance criteria, one PASS/FAIL line each.

Every check here is exact (rational or symbolic equality) unless a tolerance is
stated next to it.  A criterion that cannot hold as written reports FAIL; the
test then asserts the documented discrepancy instead, so the run stays green
while the line stays honest.
"""

import mpmath
import pytest

from oracles import zeta_log_derivative_at_2
from unitary_heights import archimedean as arch
from unitary_heights import verification as V
from unitary_heights.numberfield import (INERT, FieldData, LocalPlaceData, c3_partial_fraction_form,
                                         c3_value, log_derivative_L)
from unitary_heights.symbolic_values import SymbolicValue
from unitary_heights.whittaker_local import WhittakerSpec, whittaker_value

SMALL = V.SWEEPS["small"]
RAMIFIED_N = tuple(N for N in SMALL.N if N % 2)

# tolerances
Q0_TOL = 1e-10
ODE_TOL = 1e-5
ODE_STEP = 1e-4
K_TOL = 1e-6
EI_TOL = 1e-9
EI_MINUS_ONE = mpmath.mpf("-0.2193839344")
HEIGHT_TOL = 1e-8
PRIME_BOUND = 10 ** 6


def summarize(results):
    bad = [r for r in results if not r.ok]
    text = f"{len(results) - len(bad)}/{len(results)} cases"
    if bad:
        text += "; first failure: " + bad[0].name + (f" ({bad[0].detail})" if bad[0].detail else "")
    return not bad, text


def test_criterion_1_whittaker_oracle(report_criterion):
    results = [V.whittaker_oracle_case(spec) for N in SMALL.N for n in SMALL.n for r in SMALL.r
               for spec in V.whittaker_specs(N, n, r)]
    ok, text = summarize(results)
    report_criterion(1, ok, "brute force = closed form at s in {0,1,2}, " + text)
    assert ok


def test_criterion_2_dual_difference(report_criterion):
    results = [V.dual_difference_case(N, n, SMALL.r) for N in RAMIFIED_N for n in SMALL.n]
    results += [V.pairing_case(N, n, r) for N in RAMIFIED_N for n in SMALL.n if n % 2 == 0
                for r in SMALL.r]
    results += [V.vanishing_case(N, n) for N in SMALL.N for n in SMALL.n]
    ok, text = summarize(results)
    report_criterion(2, ok, "dual minus standard constant in r and s, " + text)
    assert ok


def test_criterion_3_induction(report_criterion):
    results = [V.induction_case(spec) for spec in V.induction_specs(SMALL)]
    ok, text = summarize(results)
    report_criterion(3, ok, "induction assembly = closed form, " + text)
    assert ok


def test_criterion_4_orbits(report_criterion):
    results = V.run_suite("orbits", "small")
    ok, text = summarize(results)
    report_criterion(4, ok, "orbit counts and types, brute force = closed form, " + text)
    assert ok


def test_criterion_5_siegel_weil(report_criterion):
    results = [V.siegel_weil_case(N, n, r) for N in SMALL.N for n in SMALL.n for r in SMALL.r]
    # pairing on the even-n ramified grid, at larger r as well
    results += [V.siegel_weil_case(N, n, r) for N in (7, 9) for n in (2, 4) for r in range(6)]
    ok, text = summarize(results)
    report_criterion(5, ok, "f = 2S (split), f - 2S = B, B(a) + B(al) = 0, " + text)
    assert ok


def test_criterion_6_degree_decompositions(report_criterion):
    results = [V.degree_case(N) for N in (2, 3, 4, 5, 7)]
    ok, text = summarize(results)
    report_criterion(6, ok, "three decompositions for r <= 10, N <= 7, " + text)
    assert ok


def test_criterion_7_c3(report_criterion):
    forms = all(c3_value(n) == c3_partial_fraction_form(n) for n in range(1, 51))
    arch_forms = all(arch.projection_constant_check(n)[0] for n in range(1, 51))
    at_one = c3_value(1) == SymbolicValue.rational(-1) / 2 - SymbolicValue.log_of(2)
    ok = forms and arch_forms and at_one
    report_criterion(7, ok, f"forms agree n <= 50: {forms and arch_forms}, c3(1) = -1/2 - log 2: {at_one}")
    assert ok


def test_criterion_8_green_kernel(report_criterion):
    with mpmath.workdps(30):
        q02 = abs(arch.green_kernel_q(0, 1, 2) - mpmath.log(2) / 2)
        res = max(abs(arch.green_ode_residual(s, n, t, ODE_STEP))
                  for s in (0, 0.5, 1) for n in (1, 2, 3) for t in (1.5, 2, 5, 20))
        ratio = (arch.green_ode_residual(0.5, 2, 2.5, 1e-3)
                 / arch.green_ode_residual(0.5, 2, 2.5, 5e-4))
    ok = q02 < Q0_TOL and res < ODE_TOL and 3.5 < ratio < 4.5
    report_criterion(8, ok, f"|Q_0(2) - log2/2| = {mpmath.nstr(q02, 2)}, max ODE residual "
                            f"{mpmath.nstr(res, 3)}, halving h divides residual by {mpmath.nstr(ratio, 4)}")
    assert ok


def test_criterion_9_archimedean(report_criterion):
    qs, ns = (-0.5, -1, -5), (1, 2)
    with mpmath.workdps(30):
        literal = max(abs(arch.k_integral(0, n, q) - arch.k_integral_via_q(n, q, literal=True))
                      for n in ns for q in qs)
        corrected = max(abs(arch.k_integral(0, n, q) - arch.k_integral_via_q(n, q))
                        for n in ns for q in qs)
        ratios = {n: [arch.k_integral_via_q(n, q, literal=True) / arch.k_integral(0, n, q) for q in qs]
                  for n in ns}
        ei = abs(arch.exp_integral_ei(-1) - arch.ei_quadrature(-1))
        ei_ref = abs(arch.exp_integral_ei(-1) - EI_MINUS_ONE)
    ok = literal < K_TOL and ei < EI_TOL
    report_criterion(9, ok, f"printed k/Q relation max err {mpmath.nstr(literal, 3)} (n=2 off by "
                            f"factor {mpmath.nstr(ratios[2][0], 6)}); corrected coefficient err "
                            f"{mpmath.nstr(corrected, 2)}; |Ei(-1) - quad| = {mpmath.nstr(ei, 2)}")
    # The printed coefficient equals n times the exact one at s = 0, so n = 2 cannot pass.
    assert ei < EI_TOL and ei_ref < 1e-10
    assert corrected < K_TOL
    for n in ns:
        assert all(abs(r - n) < 1e-20 for r in ratios[n])
    assert not ok


def test_criterion_10_heights(report_criterion):
    results = V.heights_cases(PRIME_BOUND)
    ok, text = summarize(results)
    fd = FieldData.real_quadratic(5, -1)
    from unitary_heights import heights as H
    bounds = [H.modular_height(fd, n, H.PRE_FE, PRIME_BOUND).error_bound for n in (1, 2, 3)]
    report_criterion(10, ok, f"base case, pre/post (symbolic and |diff| <= {HEIGHT_TOL}), "
                             f"induction 2..10, {text}; combined tail bound {max(bounds):.2e} "
                             "is dominated by the s = 2 Euler tail")
    assert ok


def test_criterion_11_l_series(report_criterion):
    qi = FieldData.rational(-1)
    ref = zeta_log_derivative_at_2()
    v = log_derivative_L(qi, 2, 0, prime_bound=PRIME_BOUND)
    err = abs(v.value - ref)
    bounds = [log_derivative_L(qi, 2, 0, prime_bound=B).tail_bound for B in (10 ** 4, 10 ** 5, 10 ** 6)]
    monotone = bounds[0] > bounds[1] > bounds[2]
    ok = err <= v.tail_bound and monotone
    report_criterion(11, ok, f"zeta'(2)/zeta(2) = {mpmath.nstr(v.value, 12)}, |err| {mpmath.nstr(err, 2)} "
                             f"<= bound {v.tail_bound:.2e}; bounds {', '.join(f'{b:.2e}' for b in bounds)}")
    assert ok


@pytest.mark.parametrize("Ns", [(2, 3, 4, 5, 7, 9, 11, 25)])
def test_criterion_12_multiplicity(report_criterion, Ns):
    results = [V.multiplicity_case(N, v) for N in Ns for v in (1, 3)]
    vanish = all(whittaker_value(WhittakerSpec(LocalPlaceData(N, INERT), 0, v), 0).is_zero()
                 for N in Ns for v in (1, 3))
    ok, text = summarize(results)
    ok = ok and vanish
    report_criterion(12, ok, f"2k = m log N at inert places, v in {{1,3}}, W(0) = 0: {vanish}, " + text)
    assert ok
