"""Global height formulas assembled from L-function log-derivatives and exact constants."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import mpmath

from .numberfield import (TABLE_MODE, FieldData, LExpression, LSeriesValue, LSymbol,
                          functional_equation_shift, harmonic, log_derivative_L, log_two_pi,
                          shift_expression)
from .symbolic_values import SymbolicValue, sv_to_numeric

PRE_FE, POST_FE = "pre-FE", "post-FE"

GAMMA = SymbolicValue.euler_gamma()
LOG_PI = SymbolicValue.log_pi()


def _L(s: int, k: int, coeff=1) -> LExpression:
    return LExpression.symbol(s, k, coeff)


def _const(v: SymbolicValue) -> LExpression:
    return LExpression(v)


def _log(m) -> SymbolicValue:
    return SymbolicValue.log_of(m)


# ---------------------------------------------------------------------------
# symbolic formulas
# ---------------------------------------------------------------------------

def modular_height_expression(fd: FieldData, n: int, form: str = PRE_FE,
                              omit_conductor: bool = False) -> LExpression:
    """h(X) for the rank-(n+1) unitary Shimura variety, L-values symbolic.

    The post-FE form substitutes the reflection identity at n = 0.  With the
    corrected identity its log d_{E/F} coefficient is -(n-1)/2; omitting
    the conductor gives +(n-1)/2.
    """
    if n < 1:
        raise ValueError("n must be positive")
    d = fd.degree
    sums = sum((_L(m + 1, m + 1, 2) for m in range(1, n + 1)), LExpression())
    harm = 2 * harmonic(n) - 1
    if form == PRE_FE:
        arch = (GAMMA + log_two_pi()) * (2 * n) - SymbolicValue.rational(harm)
        return (sums - _const(arch * d) + _L(0, 1, n - 1)
                + _const(_log(fd.disc_F) * (2 * n) + _log(fd.disc_rel_norm) * Fraction(n - 1, 2)))
    if form == POST_FE:
        arch = (GAMMA + log_two_pi()) * (n + 1) - SymbolicValue.rational(harm)
        rel = Fraction(n - 1, 2) if omit_conductor else Fraction(-(n - 1), 2)
        return (sums - _const(arch * d) - _L(1, 1, n - 1)
                + _const(_log(fd.disc_F) * (n + 1) + _log(fd.disc_rel_norm) * rel))
    raise ValueError(f"unknown form {form!r}")


def pre_to_post(fd: FieldData, expr: LExpression, omit_conductor: bool = False) -> LExpression:
    """Rewrite L'/L(0, eta) through L'/L(1, eta)."""
    return expr.substitute(LSymbol(0, 1), shift_expression(fd, 0, omit_conductor))


def curve_height_expression(fd: FieldData) -> LExpression:
    """The n = 1 base case: -2(gamma + log 2pi - 1/2)[F:Q] + 2 zeta_F'/zeta_F(2) + 2 log|d_F|."""
    arch = (GAMMA + log_two_pi() - SymbolicValue.rational(Fraction(1, 2))) * (-2 * fd.degree)
    return _const(arch + _log(fd.disc_F) * 2) + _L(2, 0, 2)


def cm_height_expression(fd: FieldData) -> LExpression:
    """-L'_f/L_f(0, eta) + (1/2) log(1/d_{E/F})."""
    return _L(0, 1, -1) + _const(_log(fd.disc_rel_norm) * Fraction(-1, 2))


def induction_bracket(fd: FieldData, n: int) -> LExpression:
    """h(X_n) - h(X_{n-1})."""
    arch = (GAMMA * 2 + log_two_pi() * 2 - SymbolicValue.rational(Fraction(2, n))) * fd.degree
    return (_L(n + 1, n + 1, 2) + _L(0, 1) - _const(arch)
            + _const(_log(fd.disc_rel_norm) * Fraction(1, 2) + _log(fd.disc_F) * 2))


@dataclass(frozen=True)
class AffineHeights:
    """LExpression plus rational multiples of named height placeholders."""

    expr: LExpression
    heights: tuple[tuple[str, Fraction], ...] = ()

    @property
    def coefficients(self) -> dict[str, Fraction]:
        return dict(self.heights)

    def __add__(self, other: "AffineHeights") -> "AffineHeights":
        h = self.coefficients
        for k, v in other.heights:
            h[k] = h.get(k, Fraction(0)) + v
        return AffineHeights(self.expr + other.expr, tuple(sorted((k, v) for k, v in h.items() if v)))

    def __neg__(self):
        return AffineHeights(-self.expr, tuple((k, -v) for k, v in self.heights))

    def __sub__(self, other):
        return self + (-other)

    def substitute(self, name: str, value: LExpression) -> "AffineHeights":
        h = self.coefficients
        c = h.pop(name, Fraction(0))
        return AffineHeights(self.expr + value * c, tuple(sorted(h.items())))

    def solve(self, name: str, target: LExpression) -> "AffineHeights":
        """The value of ``name`` making self equal to target."""
        h = self.coefficients
        c = h.pop(name)
        rest = AffineHeights(self.expr, tuple(sorted(h.items())))
        moved = AffineHeights(target) - rest
        return AffineHeights(moved.expr * (1 / c), tuple((k, v / c) for k, v in moved.heights))


def placeholder(name: str) -> AffineHeights:
    return AffineHeights(LExpression(), ((name, Fraction(1)),))


def c0_expression(fd: FieldData) -> LExpression:
    """2 L'/L(0, eta) + log(|d_F| d_{E/F}) with the archimedean factor -(d/2)(gamma + log 4pi)."""
    arch = (GAMMA + _log(4) + LOG_PI) * Fraction(-fd.degree, 2)
    return (_L(0, 1) + _const(arch)) * 2 + _const(_log(fd.disc_F * fd.disc_rel_norm))


def c4_assembly(fd: FieldData, n: int) -> AffineHeights:
    """c_4 = [F:Q](2/n - gamma - log pi) + c_0 + 2 sum_v (L_v'/L_v(n+1) - log|d_v|) + h(Z) - h(X) + L.P.

    sum_v L_v'/L_v(n+1, eta_v^{n+1}) = L_f'/L_f(n+1, eta^{n+1}) and sum_v log|d_v| = -log|d_F|.
    """
    base = (SymbolicValue.rational(Fraction(2, n)) - GAMMA - LOG_PI) * fd.degree
    expr = (_const(base) + c0_expression(fd) + _L(n + 1, n + 1, 2)
            + _const(_log(fd.disc_F) * 2))
    return (AffineHeights(expr) + placeholder("h(Z)") - placeholder("h(X)")
            + placeholder("L.P"))


def solve_induction(fd: FieldData, n: int) -> AffineHeights:
    """h(X) from c_4 = -sum_v log|d_v| = log|d_F| with L.P the CM-point height."""
    c4 = c4_assembly(fd, n).substitute("L.P", cm_height_expression(fd))
    return c4.solve("h(X)", _const(_log(fd.disc_F)))


def induction_step_check(fd: FieldData, n: int) -> tuple[bool, LExpression]:
    """Symbolic check that h(X_n) - h(X_{n-1}) equals the induction bracket."""
    if n < 2:
        raise ValueError("the induction step needs n >= 2")
    diff = (modular_height_expression(fd, n) - modular_height_expression(fd, n - 1)
            - induction_bracket(fd, n))
    solved = solve_induction(fd, n)
    via_c4 = solved.expr - induction_bracket(fd, n)
    ok = diff.is_zero() and via_c4.is_zero() and solved.coefficients == {"h(Z)": Fraction(1)}
    return ok, diff + via_c4


def telescoping_check(fd: FieldData, n: int) -> bool:
    total = curve_height_expression(fd)
    for m in range(2, n + 1):
        total = total + induction_bracket(fd, m)
    return (total - modular_height_expression(fd, n)).is_zero()


# ---------------------------------------------------------------------------
# numeric reports
# ---------------------------------------------------------------------------

@dataclass
class HeightReport:
    formula: str
    symbolic: SymbolicValue
    l_series: list[tuple[str, LSeriesValue]]
    total: mpmath.mpf
    error_bound: float
    rigorous: bool
    expression: LExpression | None = None
    annotations: list[str] = field(default_factory=list)

    def lines(self) -> list[tuple[str, str]]:
        out = [("symbolic part", repr(self.symbolic)),
               ("symbolic numeric", mpmath.nstr(sv_to_numeric(self.symbolic, 15), 15))]
        for label, v in self.l_series:
            out.append((label, f"{mpmath.nstr(v.value, 15)} (+/- {v.tail_bound:.3e})"))
        out.append(("total", f"{mpmath.nstr(self.total, 15)} (+/- {self.error_bound:.3e})"))
        return out


def evaluate_symbol(fd: FieldData, sym: LSymbol, prime_bound: int | None = None,
                    precision: int = 12) -> LSeriesValue:
    """Numeric L'_f/L_f(s, eta^parity); s = 0 goes through the reflection identity in table mode."""
    if sym.s == 0:
        if fd.mode == TABLE_MODE:
            at_one = log_derivative_L(fd, 1, sym.parity, prime_bound, precision)
            shifted = functional_equation_shift(fd, 0, at_one, precision=precision)
            return shifted.as_lseries(str(sym))
        return log_derivative_L(fd, 0, sym.parity, prime_bound, precision, method="dirichlet")
    return log_derivative_L(fd, sym.s, sym.parity, prime_bound, precision)


def evaluate_expression(name: str, fd: FieldData, expr: LExpression,
                        prime_bound: int | None = None, precision: int = 12,
                        overrides: dict | None = None) -> HeightReport:
    overrides = overrides or {}
    l_parts = []
    with mpmath.workdps(precision + 15):
        total = sv_to_numeric(expr.constant, precision + 5)
        err, rigorous = 0.0, True
        for sym, c in sorted(expr.l_terms.items(), key=lambda kv: (kv[0].s, kv[0].parity)):
            v = overrides.get(sym) or evaluate_symbol(fd, sym, prime_bound, precision)
            cf = mpmath.mpf(c.numerator) / c.denominator
            scaled = LSeriesValue(cf * v.value, float(abs(cf)) * v.tail_bound, v.rigorous,
                                  f"{c} * {sym}")
            l_parts.append((scaled.label, scaled))
            total += scaled.value
            err += scaled.tail_bound
            rigorous = rigorous and v.rigorous
    return HeightReport(name, expr.constant, l_parts, +total, err, rigorous, expr,
                        fd.hypotheses_report())


def modular_height(fd: FieldData, n: int, form: str = PRE_FE, prime_bound: int | None = None,
                   precision: int = 12, omit_conductor: bool = False) -> HeightReport:
    expr = modular_height_expression(fd, n, form, omit_conductor)
    return evaluate_expression(f"modular height n={n} ({form})", fd, expr, prime_bound, precision)


def cm_point_height(fd: FieldData, prime_bound: int | None = None,
                    precision: int = 12) -> HeightReport:
    """CM-point height with L'_f/L_f(0, eta) obtained from s = 1 by the reflection identity."""
    at_one = log_derivative_L(fd, 1, 1, prime_bound, precision)
    shifted = functional_equation_shift(fd, 0, at_one, precision=precision).as_lseries("L'/L(0, eta)")
    return evaluate_expression("CM point height", fd, cm_height_expression(fd), prime_bound,
                               precision, {LSymbol(0, 1): shifted})
