"""Archimedean special functions: Ei, Whittaker values, the Green kernel Q_s and the k-integral."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import mpmath

from .numberfield import DivergenceError, c3_partial_fraction_form, c3_value
from .symbolic_values import SymbolicValue

DPS = 30

# Q_s(t) + LOG_SINGULARITY_MULTIPLE * log(t - 1) is bounded as t -> 1+, for all s and n:
# 2F1(a, b; a + b; z) ~ -Gamma(a+b)/(Gamma(a)Gamma(b)) log(1 - z) cancels the Gamma prefactor of Q_s.
LOG_SINGULARITY_MULTIPLE = Fraction(1, 2)


class ArchDomainError(ValueError):
    pass


def gamma(x):
    return mpmath.gamma(x)


def digamma(x):
    return mpmath.digamma(x)


def exp_integral_ei(x) -> mpmath.mpf:
    """Ei(x) = -PV int_{-x}^inf e^{-t}/t dt."""
    if x == 0:
        raise ArchDomainError("Ei has a logarithmic singularity at 0")
    with mpmath.workdps(DPS):
        return +mpmath.ei(x)


def ei_quadrature(x) -> mpmath.mpf:
    """Independent Ei(x) for x < 0 as -int_{-x}^inf e^{-t}/t dt."""
    if x >= 0:
        raise ArchDomainError("quadrature oracle covers x < 0")
    with mpmath.workdps(DPS):
        return -mpmath.quad(lambda t: mpmath.exp(-t) / t, [-x, -x + 1, mpmath.inf])


@dataclass(frozen=True)
class EighthRoot:
    """exp(2 pi i k / 8), carried exactly."""

    k: int

    def __post_init__(self):
        object.__setattr__(self, "k", self.k % 8)

    def __mul__(self, other: "EighthRoot") -> "EighthRoot":
        return EighthRoot(self.k + other.k)

    def to_complex(self) -> complex:
        with mpmath.workdps(DPS):
            return complex(mpmath.expjpi(mpmath.mpf(self.k) / 4))


def weil_index(n: int) -> EighthRoot:
    """gamma_{2n+2} = exp(2 pi i (2n+2)/8)."""
    return EighthRoot(2 * n + 2)


@dataclass(frozen=True)
class ArchValue:
    """phase * magnitude with an exact phase."""

    phase: EighthRoot
    magnitude: mpmath.mpf

    def to_complex(self) -> complex:
        return self.phase.to_complex() * complex(self.magnitude)


@dataclass(frozen=True)
class ArchWhittakerSpec:
    n: int
    a: float

    def __post_init__(self):
        if self.n < 1:
            raise ArchDomainError("n must be positive")


def derivative_bracket(n: int, a) -> mpmath.mpf:
    """sum_i binom(n,i) (4 a pi)^{-i} Gamma(i) + log(a pi) + (gamma - H_n)."""
    with mpmath.workdps(DPS):
        a = mpmath.mpf(a)
        total = mpmath.fsum(mpmath.binomial(n, i) * (4 * a * mpmath.pi) ** (-i) * gamma(i)
                            for i in range(1, n + 1))
        # gamma - H_n = -psi(n + 1)
        return total + mpmath.log(a * mpmath.pi) - digamma(n + 1)


def whittaker_arch(spec: ArchWhittakerSpec, derivative: bool = False) -> ArchValue:
    """W_{a,v}(0, 1, Phi_v) or its s-derivative at an archimedean place."""
    n, a = spec.n, spec.a
    phase = weil_index(n)
    if a <= 0:
        return ArchValue(phase, mpmath.mpf(0))
    with mpmath.workdps(DPS):
        a = mpmath.mpf(a)
        if not derivative:
            mag = (2 * mpmath.pi) ** (n + 1) / gamma(n + 1) * a ** n * mpmath.exp(-2 * mpmath.pi * a)
            return ArchValue(phase, +mag)
        pref = mpmath.exp(-2 * mpmath.pi * a) * (2 * a) ** n * mpmath.pi ** (n + 1) / gamma(n + 1)
        return ArchValue(phase, +(pref * derivative_bracket(n, a)))


def green_kernel_q(s, n: int, t, terms: int | None = None) -> mpmath.mpf:
    """Q_s(t) = Gamma(s+n)Gamma(s+1) / (2 Gamma(2s+n+1) t^{s+n}) * 2F1(s+n, s+1; 2s+n+1; 1/t).

    With ``terms`` the hypergeometric series is truncated after that many terms.
    """
    if t <= 1:
        raise ArchDomainError("Q_s(t) needs t > 1")
    with mpmath.workdps(DPS):
        s, t = mpmath.mpf(s), mpmath.mpf(t)
        a, b, c = s + n, s + 1, 2 * s + n + 1
        pref = gamma(a) * gamma(b) / (2 * gamma(c) * t ** a)
        if terms is None:
            return +(pref * mpmath.hyp2f1(a, b, c, 1 / t))
        z = 1 / t
        term, total = mpmath.mpf(1), mpmath.mpf(0)
        for k in range(terms):
            total += term
            term *= (a + k) * (b + k) / ((c + k) * (k + 1)) * z
        return +(pref * total)


def green_ode_residual(s, n: int, t, h) -> mpmath.mpf:
    """(t - t^2) Q'' + (n - (n+1) t) Q' + s(s+n) Q by central differences."""
    if t - 2 * h <= 1:
        raise ArchDomainError("stencil leaves the domain t > 1")
    with mpmath.workdps(DPS):
        t, h = mpmath.mpf(t), mpmath.mpf(h)
        q0 = green_kernel_q(s, n, t)
        qp, qm = green_kernel_q(s, n, t + h), green_kernel_q(s, n, t - h)
        d1 = (qp - qm) / (2 * h)
        d2 = (qp - 2 * q0 + qm) / (h * h)
        return +((t - t * t) * d2 + (n - (n + 1) * t) * d1 + s * (s + n) * q0)


def log_singularity_multiple(s, n: int, eps=(1e-8, 1e-12)) -> mpmath.mpf:
    """Observed c with Q_s(t) + c log(t - 1) bounded at t -> 1+."""
    with mpmath.workdps(DPS):
        e1, e2 = (mpmath.mpf(e) for e in eps)
        q1, q2 = green_kernel_q(s, n, 1 + e1), green_kernel_q(s, n, 1 + e2)
        return -(q1 - q2) / (mpmath.log(e1) - mpmath.log(e2))


def k_integral(s, n: int, q) -> mpmath.mpf:
    """Gamma(s+n)/(2 (4pi)^s Gamma(n)) * int_1^inf dt / (t (1 - q t)^{s+n}).

    After u = 1/t the integral is int_0^1 u^{s+n-1} / (u - q)^{s+n} du.
    """
    if q >= 0:
        raise DivergenceError("k-integral needs q < 0")
    with mpmath.workdps(DPS):
        s, q = mpmath.mpf(s), mpmath.mpf(q)
        integral = mpmath.quad(lambda u: u ** (s + n - 1) / (u - q) ** (s + n), [0, 1])
        return +(gamma(s + n) / (2 * (4 * mpmath.pi) ** s * gamma(n)) * integral)


def integral_via_q(s, n: int, q, literal: bool = False) -> mpmath.mpf:
    """int_1^inf dt / (t (1 - q t)^{s+n}) predicted from Q_s(1 - q).

    The corrected coefficient 2 Gamma(n) Gamma(2s+n+1) / (Gamma(s+n) Gamma(s+n+1))
    is exact at s = 0 (both sides equal int_0^{1/(1-q)} x^{n-1}/(1-x) dx).
    ``literal`` uses 2 Gamma(2s+n+1) / (Gamma(s+n) Gamma(s+1)), which is n times
    too large at s = 0.
    """
    with mpmath.workdps(DPS):
        s = mpmath.mpf(s)
        if literal:
            coeff = 2 * gamma(2 * s + n + 1) / (gamma(s + n) * gamma(s + 1))
        else:
            coeff = 2 * gamma(n) * gamma(2 * s + n + 1) / (gamma(s + n) * gamma(s + n + 1))
        return +(coeff * green_kernel_q(s, n, 1 - mpmath.mpf(q)))


def k_integral_via_q(n: int, q, literal: bool = False) -> mpmath.mpf:
    """The s = 0 k-value from the Q-relation (k = integral / 2 at s = 0)."""
    return integral_via_q(0, n, q, literal) / 2


def k_arch_value(q_y, q_y2) -> mpmath.mpf:
    """k_{Phi_v}(1, y) = -(1/2) e^{-2 pi q(y)} Ei(4 pi q(y2)) for q(y2) < 0."""
    with mpmath.workdps(DPS):
        return +(-mpmath.exp(-2 * mpmath.pi * q_y) * exp_integral_ei(4 * mpmath.pi * q_y2) / 2)


def projection_constant_check(n: int) -> tuple[bool, SymbolicValue, SymbolicValue]:
    """Both forms of the holomorphic projection constant c_3, exactly."""
    if n < 1:
        raise ArchDomainError("n must be positive")
    lhs, rhs = c3_partial_fraction_form(n), c3_value(n)
    return lhs == rhs, lhs, rhs


def green_difference_constant(n: int) -> Fraction:
    """Weakly admissible minus admissible Green function, per unit degree ratio: -1/(2n)."""
    return Fraction(-1, 2 * n)


def green_error_coefficient(degree: int, n: int) -> Fraction:
    """Coefficient -[F:Q]/n of Z_*(g, Phi) . c_1(L)^{n-1} in the error term."""
    return Fraction(-degree, n)
