"""Fields, places, the quadratic character eta and Hecke L-function log-derivatives.

Built-in fields are F = Q with E = Q(sqrt(delta)), and F = Q(sqrt m) with
E = F(sqrt(delta)) for a negative rational integer delta.  In both cases every
L-function in sight is a product of Dirichlet L-functions of quadratic
characters, which gives an exact handle on places and on values at s = 0, 1.
Anything else is described by a place table.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Mapping, Sequence

import mpmath
import numpy as np
from sympy import factorint, isprime

from .symbolic_values import RationalFunctionX, SymbolicValue

SPLIT, INERT, RAMIFIED = "split", "inert", "ramified"
SPLITTINGS = (SPLIT, INERT, RAMIFIED)


class FieldError(ValueError):
    """Invalid field or place data."""


class UnknownPrimeError(FieldError):
    """Prime outside the range covered by a table-driven field."""


class DivergenceError(ValueError):
    """Euler product requested outside its range of convergence."""


class MissingInputError(ValueError):
    """A constant needs an L-value that was not supplied."""


# ---------------------------------------------------------------------------
# places
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LocalPlaceData:
    """A finite place v of F with its behaviour in E/F."""

    N: int
    splitting: str
    e: int = 0
    p: int | None = None
    allow_ramified_different: bool = False

    def __post_init__(self):
        if self.splitting not in SPLITTINGS:
            raise FieldError(f"unknown splitting {self.splitting!r}")
        if self.N < 2:
            raise FieldError("residue cardinality must be >= 2")
        fac = factorint(self.N)
        if len(fac) != 1:
            raise FieldError(f"N_v={self.N} is not a prime power")
        (p, _), = fac.items()
        if self.p is None:
            object.__setattr__(self, "p", int(p))
        elif self.p != p:
            raise FieldError(f"N_v={self.N} is not a power of p={self.p}")
        if self.e < 0:
            raise FieldError("different exponent must be non-negative")
        if self.splitting == RAMIFIED and self.e != 0 and not self.allow_ramified_different:
            raise FieldError("ramified place over a place of F ramified over Q "
                             "(e_v > 0) violates the standing assumption")

    @property
    def residue_degree(self) -> int:
        return round(math.log(self.N, self.p))

    @property
    def abs_d(self) -> Fraction:
        """|d_v| = N^{-e}."""
        return Fraction(1, self.N ** self.e)

    def eta_power(self, k: int) -> int | None:
        """eta_v(uniformizer)^k: +1, -1, or None when eta_v^k is ramified."""
        if k % 2 == 0 or self.splitting == SPLIT:
            return 1
        if self.splitting == INERT:
            return -1
        return None


def euler_factor(place: LocalPlaceData, k: int) -> RationalFunctionX:
    """L_v(s, eta^k) as a rational function of X = N^{-s}."""
    if k < 0:
        raise ValueError("k must be non-negative")
    x = RationalFunctionX.x(place.N)
    sign = place.eta_power(k)
    if sign is None:
        return RationalFunctionX.constant(1, place.N)
    return 1 / (1 - sign * x)


def local_log_derivative(place: LocalPlaceData, s: int, k: int) -> SymbolicValue:
    """L_v'/L_v(s, eta^k) at an integer s, exactly (a multiple of log N)."""
    sign = place.eta_power(k)
    if sign is None:
        return SymbolicValue()
    x = Fraction(place.N) ** (-s) * sign
    return SymbolicValue.log_of(place.N) * (-x / (1 - x))


# ---------------------------------------------------------------------------
# quadratic characters
# ---------------------------------------------------------------------------

def fundamental_discriminant(m: int) -> int:
    """Discriminant of Q(sqrt m) for a non-square integer m."""
    if m in (0, 1):
        raise FieldError("Q(sqrt m) is not quadratic")
    sign = -1 if m < 0 else 1
    c = 1
    for p, e in factorint(abs(m)).items():
        if e % 2:
            c *= p
    k = sign * c
    if k == 1:
        raise FieldError(f"{m} is a square")
    return k if k % 4 == 1 else 4 * k


def kronecker(D: int, n: int) -> int:
    """Kronecker symbol (D/n) for a prime n."""
    if n == 2:
        if D % 2 == 0:
            return 0
        return 1 if D % 8 in (1, 7) else -1
    r = D % n
    if r == 0:
        return 0
    return 1 if pow(r, (n - 1) // 2, n) == 1 else -1


@lru_cache(maxsize=32)
def character_table(D: int) -> tuple[int, ...]:
    """Values of the Kronecker character chi_D on 0..|D|-1."""
    q = abs(D)
    out = []
    for a in range(q):
        if math.gcd(a, q) != 1:
            out.append(0)
            continue
        val = 1
        for p, e in factorint(a).items():
            val *= kronecker(D, p) ** e
        out.append(val)
    return tuple(out)


@lru_cache(maxsize=8)
def primes_up_to(bound: int) -> np.ndarray:
    sieve = np.ones(bound + 1, dtype=bool)
    sieve[:2] = False
    for i in range(2, int(bound ** 0.5) + 1):
        if sieve[i]:
            sieve[i * i::i] = False
    return np.nonzero(sieve)[0]


# ---------------------------------------------------------------------------
# fields
# ---------------------------------------------------------------------------

RATIONAL_MODE, REAL_QUADRATIC_MODE, TABLE_MODE = "rational", "real-quadratic", "table"


@dataclass(frozen=True)
class FieldData:
    """F, E/F and the finite places needed by the formulas."""

    degree: int
    disc_F: int
    disc_rel_norm: int
    mode: str
    bound: int = 10 ** 6
    table: tuple[LocalPlaceData, ...] = ()
    sqrt_m: int | None = None       # F = Q(sqrt m) in real-quadratic mode
    delta: int | None = None        # E = F(sqrt delta)
    annotations: tuple[str, ...] = field(default=())

    # constructors
    @classmethod
    def rational(cls, delta: int, bound: int = 10 ** 6) -> "FieldData":
        if delta >= 0:
            raise FieldError("E = Q(sqrt delta) must be imaginary")
        D = fundamental_discriminant(delta)
        return cls(degree=1, disc_F=1, disc_rel_norm=abs(D), mode=RATIONAL_MODE,
                   bound=bound, delta=delta)

    @classmethod
    def real_quadratic(cls, m: int, delta: int, bound: int = 10 ** 6) -> "FieldData":
        if m <= 1:
            raise FieldError("real quadratic mode needs m > 1")
        if delta >= 0:
            raise FieldError("the relative generator must be totally negative")
        dF = fundamental_discriminant(m)
        D1 = fundamental_discriminant(delta)
        D2 = fundamental_discriminant(delta * m)
        if D1 == dF or D2 == dF:
            raise FieldError("E/F is not a quadratic extension")
        rel = abs(D1 * D2) // dF
        return cls(degree=2, disc_F=dF, disc_rel_norm=rel, mode=REAL_QUADRATIC_MODE,
                   bound=bound, sqrt_m=m, delta=delta)

    @classmethod
    def from_table(cls, degree: int, disc_F: int, disc_rel_norm: int,
                   places: Sequence[LocalPlaceData], bound: int | None = None) -> "FieldData":
        places = tuple(sorted(places, key=lambda v: (v.p, v.N, v.splitting)))
        if bound is None:
            bound = max((v.p for v in places), default=1)
        fd = cls(degree=degree, disc_F=disc_F, disc_rel_norm=disc_rel_norm, mode=TABLE_MODE,
                 bound=bound, table=places)
        fd.validate()
        return fd

    def with_bound(self, bound: int) -> "FieldData":
        return FieldData(self.degree, self.disc_F, self.disc_rel_norm, self.mode, bound,
                         self.table, self.sqrt_m, self.delta, self.annotations)

    # characters
    @cached_property
    def odd_characters(self) -> tuple[int, ...]:
        """Discriminants D with L_f(s, eta) = prod L(s, chi_D) (built-in modes)."""
        if self.mode == RATIONAL_MODE:
            return (fundamental_discriminant(self.delta),)
        if self.mode == REAL_QUADRATIC_MODE:
            return (fundamental_discriminant(self.delta),
                    fundamental_discriminant(self.delta * self.sqrt_m))
        raise FieldError("table-driven fields carry no Dirichlet characters")

    @cached_property
    def even_characters(self) -> tuple[int, ...]:
        """Discriminants D with zeta_F(s) = prod L(s, chi_D), D = 1 meaning zeta."""
        if self.mode == RATIONAL_MODE:
            return (1,)
        if self.mode == REAL_QUADRATIC_MODE:
            return (1, self.disc_F)
        raise FieldError("table-driven fields carry no Dirichlet characters")

    # places
    def splitting_of(self, p: int) -> list[LocalPlaceData]:
        if not isprime(p):
            raise FieldError(f"{p} is not prime")
        if self.mode == TABLE_MODE:
            if p > self.bound:
                raise UnknownPrimeError(f"prime {p} beyond the table bound {self.bound}")
            found = [v for v in self.table if v.p == p]
            if not found:
                raise UnknownPrimeError(f"prime {p} missing from the place table")
            return found
        if self.mode == RATIONAL_MODE:
            chi = kronecker(self.odd_characters[0], p)
            return [LocalPlaceData(p, {1: SPLIT, -1: INERT, 0: RAMIFIED}[chi], 0, p)]
        return self._real_quadratic_places(p)

    def _real_quadratic_places(self, p: int) -> list[LocalPlaceData]:
        chi_F = kronecker(self.disc_F, p)
        c1, c2 = (kronecker(D, p) for D in self.odd_characters)
        if chi_F == 1:
            kind = RAMIFIED if c1 == 0 else (SPLIT if c1 == 1 else INERT)
            return [LocalPlaceData(p, kind, 0, p, True) for _ in range(2)]
        if chi_F == -1:
            kind = RAMIFIED if c1 == 0 else SPLIT
            return [LocalPlaceData(p * p, kind, 0, p, True)]
        # p ramified in F: one place of norm p; eta_v read off the unramified factor
        e = _valuation(self.disc_F, p)
        if c1 == 0 and c2 == 0:
            kind = RAMIFIED
        else:
            kind = SPLIT if (c1 or c2) == 1 else INERT
        return [LocalPlaceData(p, kind, e, p, True)]

    def places_up_to(self, bound: int) -> list[LocalPlaceData]:
        if self.mode == TABLE_MODE:
            return [v for v in self.table if v.p <= bound]
        out = []
        for p in primes_up_to(bound):
            out.extend(self.splitting_of(int(p)))
        return out

    # invariants
    def validate(self):
        if self.degree < 1 or self.disc_F < 1 or self.disc_rel_norm < 1:
            raise FieldError("degree and discriminants must be positive")
        by_p: dict[int, list[LocalPlaceData]] = {}
        for v in self.table:
            by_p.setdefault(v.p, []).append(v)
        for p, vs in by_p.items():
            if sum(v.residue_degree for v in vs) > self.degree:
                raise FieldError(f"places above {p} exceed [F:Q]={self.degree}")
            part = 1
            for v in vs:
                part *= v.N ** v.e
            if part != p ** _valuation(self.disc_F, p):
                raise FieldError(f"different exponents above {p} disagree with |d_F|={self.disc_F}")
        if self.mode in (RATIONAL_MODE, REAL_QUADRATIC_MODE):
            for v in self.table:
                computed = self.splitting_of(v.p)
                if v.splitting not in {w.splitting for w in computed}:
                    raise FieldError(f"table entry at p={v.p} disagrees with computed splitting")

    def hypotheses_report(self) -> list[str]:
        """Standing hypotheses of the height formula that this field violates."""
        issues = []
        if self.degree == 1:
            issues.append("F = Q (the formula is proved for F != Q)")
        if self.mode != TABLE_MODE:
            for p in factorint(self.disc_F * self.disc_rel_norm):
                for v in self.splitting_of(int(p)):
                    if v.splitting == RAMIFIED and v.e > 0:
                        issues.append(f"place above {p} ramified in both F/Q and E/F")
                    if v.splitting == RAMIFIED and v.p == 2:
                        issues.append("E/F ramified above 2")
        else:
            for v in self.table:
                if v.splitting == RAMIFIED and v.p == 2:
                    issues.append("E/F ramified above 2")
        return sorted(set(issues))


def _valuation(m: int, p: int) -> int:
    m = abs(m)
    k = 0
    while m and m % p == 0:
        m //= p
        k += 1
    return k


# ---------------------------------------------------------------------------
# L-series
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LSeriesValue:
    """L'_f/L_f(s, eta^k) with an error bound."""

    value: mpmath.mpf
    tail_bound: float
    rigorous: bool
    label: str = ""

    def __post_init__(self):
        if not math.isfinite(self.tail_bound) or self.tail_bound < 0:
            raise ValueError("tail bound must be finite and non-negative")


def euler_tail_bound(degree: int, s: float, bound: int) -> float:
    """Bound for sum over places with N_v > B of log N_v N_v^{-s}/(1 - N_v^{-s}).

    At most [F:Q] places of norm p^f lie over p, each term is at most
    log p * p^{-s}/(1 - B^{-s}), and the prime sum is dominated by
    int_B^inf log t * t^{-s} dt = B^{1-s} (log B/(s-1) + 1/(s-1)^2).
    """
    if s <= 1:
        return math.inf
    integral = bound ** (1 - s) * (math.log(bound) / (s - 1) + 1 / (s - 1) ** 2)
    return degree * integral / (1 - bound ** (-s))


@lru_cache(maxsize=16)
def place_arrays(field: FieldData, bound: int) -> tuple[np.ndarray, np.ndarray]:
    """(N_v, eta_v) over places with N_v <= B; eta_v = 0 marks ramified places."""
    if field.mode == TABLE_MODE:
        vs = [v for v in field.table if v.N <= bound]
        sign = {SPLIT: 1, INERT: -1, RAMIFIED: 0}
        return (np.array([v.N for v in vs], dtype=float),
                np.array([sign[v.splitting] for v in vs], dtype=float))
    Ns, etas = [], []
    for p in primes_up_to(bound):
        p = int(p)
        if field.mode == RATIONAL_MODE:
            Ns.append(p)
            etas.append(kronecker(field.odd_characters[0], p))
            continue
        chi_F = kronecker(field.disc_F, p)
        c1, c2 = (kronecker(D, p) for D in field.odd_characters)
        if chi_F == 1:
            Ns += [p, p]
            etas += [c1, c1]
        elif chi_F == -1:
            if p * p <= bound:
                Ns.append(p * p)
                etas.append(1 if c1 else 0)
        else:
            Ns.append(p)
            etas.append(c1 or c2)
    return np.array(Ns, dtype=float), np.array(etas, dtype=float)


def _euler_log_derivative(field: FieldData, s: float, k: int, bound: int):
    """-sum_v log N_v * x_v/(1 - x_v) with x_v = eta_v^k N_v^{-s}, over N_v <= B."""
    N, eta = place_arrays(field, bound)
    sign = np.ones_like(eta) if k % 2 == 0 else eta
    x = sign * N ** (-float(s))
    terms = -np.log(N) * x / (1 - x)
    value = math.fsum(terms.tolist())
    rounding = 4 * len(terms) * 2.0 ** -52 * max(1.0, abs(value))
    return value, rounding


def _dirichlet_log_derivative(D: int, s, dps: int):
    """L'/L(s, chi_D) by mpmath's Hurwitz-zeta evaluation (D = 1: Riemann zeta)."""
    with mpmath.workdps(dps):
        chi = [1] if D == 1 else list(character_table(D))
        if D == 1 and s == 1:
            raise DivergenceError("zeta has a pole at s = 1")
        if s == 1:
            # Laurent data of Hurwitz zeta at 1: gamma_0(x) = -psi(x), gamma_1(x)
            q = abs(D)
            xs = [(c, mpmath.mpf(a) / q) for a, c in enumerate(chi) if c]
            value = -mpmath.fsum(c * mpmath.psi(0, x) for c, x in xs)
            deriv = -mpmath.fsum(c * (mpmath.stieltjes(1, x) - mpmath.log(q) * mpmath.psi(0, x))
                                 for c, x in xs)
            return deriv / value
        return mpmath.dirichlet(s, chi, 1) / mpmath.dirichlet(s, chi)


def log_derivative_L(field: FieldData, s, k: int, prime_bound: int | None = None,
                     precision: int = 12, method: str = "auto") -> LSeriesValue:
    """L'_f(s, eta^k)/L_f(s, eta^k).

    method "euler" sums the differentiated Euler product over N_v <= B and
    reports a tail bound; "dirichlet" factors the L-function into Dirichlet
    L-functions and evaluates them to the requested precision (built-in modes
    only).  "auto" picks the Euler product for s > 1 and Dirichlet otherwise.
    """
    bound = prime_bound or field.bound
    if field.mode == TABLE_MODE:
        # places beyond the table are unknown, so the tail starts at the table bound
        bound = min(bound, field.bound)
    label = f"L'/L({s}, eta^{k % 2})"
    if method == "auto":
        method = "euler" if (s > 1 or field.mode == TABLE_MODE) else "dirichlet"
    if method == "dirichlet":
        if field.mode == TABLE_MODE:
            raise FieldError("Dirichlet factorisation needs a built-in field")
        chars = field.odd_characters if k % 2 else field.even_characters
        dps = precision + 10
        with mpmath.workdps(dps):
            total = mpmath.fsum(_dirichlet_log_derivative(D, s, dps) for D in chars)
        return LSeriesValue(total, 10.0 ** (-precision), True, label)
    if method != "euler":
        raise ValueError(f"unknown method {method!r}")
    if s < 1:
        raise DivergenceError("the Euler product diverges for s < 1")
    value, rounding = _euler_log_derivative(field, s, k, bound)
    if s == 1:
        # conditionally convergent: no rigorous tail, report the size of the last block
        tail = abs(value) * 1e-3 + math.log(bound) / math.sqrt(bound)
        return LSeriesValue(mpmath.mpf(value), tail, False, label)
    tail = euler_tail_bound(field.degree, s, bound) + rounding
    return LSeriesValue(mpmath.mpf(value), tail, True, label)


def log_derivative_direct(field: FieldData, s, k: int, precision: int = 20) -> mpmath.mpf:
    """Direct Hurwitz-zeta evaluation at any s (used as an oracle at s <= 0)."""
    return log_derivative_L(field, s, k, precision=precision, method="dirichlet").value


# ---------------------------------------------------------------------------
# linear expressions in L-symbols
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LSymbol:
    """The symbol L'_f/L_f(s, eta^parity)."""

    s: int
    parity: int

    def __str__(self):
        return f"L'/L({self.s}, eta^{self.parity})"


class LExpression:
    """SymbolicValue plus a rational combination of L-symbols."""

    __slots__ = ("constant", "l_terms")

    def __init__(self, constant: SymbolicValue | None = None,
                 l_terms: Mapping[LSymbol, Fraction] | None = None):
        self.constant = constant or SymbolicValue()
        self.l_terms = {k: Fraction(v) for k, v in (l_terms or {}).items() if v}

    @classmethod
    def symbol(cls, s: int, k: int, coeff=1) -> "LExpression":
        return cls(None, {LSymbol(s, k % 2): Fraction(coeff)})

    def __add__(self, other):
        other = _as_lexpr(other)
        terms = dict(self.l_terms)
        for k, v in other.l_terms.items():
            terms[k] = terms.get(k, 0) + v
        return LExpression(self.constant + other.constant, terms)

    __radd__ = __add__

    def __neg__(self):
        return LExpression(-self.constant, {k: -v for k, v in self.l_terms.items()})

    def __sub__(self, other):
        return self + (-_as_lexpr(other))

    def __rsub__(self, other):
        return _as_lexpr(other) - self

    def __mul__(self, c):
        c = Fraction(c)
        return LExpression(self.constant * c, {k: v * c for k, v in self.l_terms.items()})

    __rmul__ = __mul__

    def __eq__(self, other):
        other = _as_lexpr(other)
        return self.constant == other.constant and self.l_terms == other.l_terms

    def __hash__(self):
        return hash((self.constant, tuple(sorted((str(k), v) for k, v in self.l_terms.items()))))

    def substitute(self, sym: LSymbol, replacement: "LExpression") -> "LExpression":
        coeff = self.l_terms.get(sym, Fraction(0))
        if not coeff:
            return self
        rest = LExpression(self.constant, {k: v for k, v in self.l_terms.items() if k != sym})
        return rest + replacement * coeff

    def is_zero(self) -> bool:
        return self.constant.is_zero() and not self.l_terms

    def __repr__(self):
        parts = [f"{v}*{k}" for k, v in sorted(self.l_terms.items(), key=lambda kv: (kv[0].s, kv[0].parity))]
        return " + ".join(parts + [repr(self.constant)])


def _as_lexpr(x) -> LExpression:
    if isinstance(x, LExpression):
        return x
    if isinstance(x, SymbolicValue):
        return LExpression(x)
    return LExpression(SymbolicValue.rational(x))


def harmonic(n: int) -> Fraction:
    return sum((Fraction(1, i) for i in range(1, n + 1)), Fraction(0))


def log_two_pi() -> SymbolicValue:
    return SymbolicValue.log_of(2) + SymbolicValue.log_pi()


def conductor_norm(field: FieldData, k: int) -> int:
    """Norm of the conductor of eta^k (1 for even k)."""
    return field.disc_rel_norm if k % 2 else 1


def shift_constant(field: FieldData, n: int, omit_conductor: bool = False) -> SymbolicValue:
    """C_n with L'_f/L_f(n+1, eta^{n+1}) = -L'_f/L_f(-n, eta^{n+1}) + C_n.

    C_n = (-H_n + log 2pi + gamma)[F:Q] - log|d_F| - log N(f), where f is the
    conductor of eta^{n+1}.  With ``omit_conductor`` the conductor term is
    dropped, reproducing the identity as printed.
    """
    c = (SymbolicValue.rational(-harmonic(n)) + log_two_pi()
         + SymbolicValue.euler_gamma()) * field.degree
    c = c - SymbolicValue.log_of(field.disc_F)
    if not omit_conductor:
        c = c - SymbolicValue.log_of(conductor_norm(field, n + 1))
    return c


@dataclass(frozen=True)
class ShiftedValue:
    """A log-derivative produced by the reflection identity."""

    symbolic: SymbolicValue           # exact constant part
    input_coefficient: int            # -1: the value is -input + symbolic
    numeric: mpmath.mpf
    tail_bound: float
    rigorous: bool

    def as_lseries(self, label: str = "") -> LSeriesValue:
        return LSeriesValue(self.numeric, self.tail_bound, self.rigorous, label)


def functional_equation_shift(field: FieldData, n: int, value: LSeriesValue,
                              omit_conductor: bool = False,
                              precision: int = 12) -> ShiftedValue:
    """Turn L'_f/L_f at n+1 into L'_f/L_f at -n (and back: the map is an involution)."""
    if n < 0:
        raise ValueError("n must be non-negative")
    if not mpmath.isfinite(value.value):
        raise ValueError("input value must be finite")
    c = shift_constant(field, n, omit_conductor)
    from .symbolic_values import sv_to_numeric
    with mpmath.workdps(precision + 15):
        numeric = -value.value + sv_to_numeric(c, precision + 5)
    return ShiftedValue(c, -1, numeric, value.tail_bound, value.rigorous)


def shift_expression(field: FieldData, n: int, omit_conductor: bool = False) -> LExpression:
    """L'_f/L_f(-n, eta^{n+1}) written in terms of the value at n+1."""
    return (LExpression.symbol(n + 1, n + 1, -1)
            + LExpression(shift_constant(field, n, omit_conductor)))


# ---------------------------------------------------------------------------
# named constants
# ---------------------------------------------------------------------------

def c3_value(n: int) -> SymbolicValue:
    """sum_{i<n} 1/(2i) - 1/(2n) - (log 4)/2."""
    if n < 1:
        raise ValueError("n must be positive")
    q = sum((Fraction(1, 2 * i) for i in range(1, n)), Fraction(0)) - Fraction(1, 2 * n)
    return SymbolicValue.rational(q) - SymbolicValue.log_of(2)


def c3_partial_fraction_form(n: int) -> SymbolicValue:
    """sum_{i<n} n/(2i(n-i)) - (log 4 + H_n)/2."""
    q = sum((Fraction(n, 2 * i * (n - i)) for i in range(1, n)), Fraction(0))
    return SymbolicValue.rational(q - harmonic(n) / 2) - SymbolicValue.log_of(2)


def archimedean_comparison_constant(n: int) -> SymbolicValue:
    """-H_n + gamma + log 4pi."""
    return (SymbolicValue.rational(-harmonic(n)) + SymbolicValue.euler_gamma()
            + SymbolicValue.log_of(4) + SymbolicValue.log_pi())


def archimedean_log_factor(field: FieldData, k: int) -> SymbolicValue:
    """L_inf'/L_inf(0, eta^k) for odd k: -(gamma + log 4pi)/2 per real place."""
    if k % 2 == 0:
        raise ValueError("only the odd character is used at s = 0")
    return (SymbolicValue.euler_gamma() + SymbolicValue.log_of(4)
            + SymbolicValue.log_pi()) * Fraction(-field.degree, 2)


def log_disc_ratio(field: FieldData) -> SymbolicValue:
    """log|d_E/d_F| = log(|d_F| d_{E/F})."""
    return SymbolicValue.log_of(field.disc_F * field.disc_rel_norm)


def constant_c(kind: str, field: FieldData, n: int,
               l_inputs: Mapping[str, LExpression | LSeriesValue] | None = None):
    """Named constants as an LExpression (L-values kept symbolic) plus numeric value.

    ``l_inputs`` maps "L0" (L'_f/L_f(0, eta)) and "L{s}_{parity}" names, e.g. "L3_1"
    for L'_f/L_f(3, eta^3), to numeric values.  When absent, c0/c1/c4 stay
    symbolic and numeric is None.
    """
    l_inputs = dict(l_inputs or {})
    L0 = LExpression.symbol(0, 1)
    if kind == "c3":
        expr = LExpression(c3_value(n))
    elif kind == "archimedean-comparison":
        expr = LExpression(archimedean_comparison_constant(n))
    elif kind == "c1":
        expr = L0 * 2 + LExpression(log_disc_ratio(field))
    elif kind == "c0":
        expr = L0 * 2 + LExpression(archimedean_log_factor(field, 1) * 2 + log_disc_ratio(field))
    elif kind == "c4-partial":
        c0, _ = constant_c("c0", field, n)
        expr = (LExpression(SymbolicValue.rational(Fraction(2, n)) * field.degree
                            - (SymbolicValue.euler_gamma() + SymbolicValue.log_pi()) * field.degree)
                + c0 + LExpression.symbol(n + 1, n + 1, 2)
                + LExpression(SymbolicValue.log_of(field.disc_F) * 2))
    else:
        raise ValueError(f"unknown constant {kind!r}")
    return expr, evaluate_lexpression(expr, l_inputs)


def evaluate_lexpression(expr: LExpression, values: Mapping, precision: int = 15):
    """Numeric value when every L-symbol has a supplied value, else None."""
    from .symbolic_values import sv_to_numeric
    lookup = {}
    for key, val in values.items():
        sym = key if isinstance(key, LSymbol) else _named_symbol(key, expr)
        lookup[sym] = val.value if isinstance(val, LSeriesValue) else val
    with mpmath.workdps(precision + 10):
        total = sv_to_numeric(expr.constant, precision)
        for sym, c in expr.l_terms.items():
            if sym not in lookup:
                if values:
                    raise MissingInputError(f"missing value for {sym}")
                return None
            total += mpmath.mpf(c.numerator) / c.denominator * lookup[sym]
        return total


def _named_symbol(name: str, expr: LExpression) -> LSymbol:
    if name == "L0":
        return LSymbol(0, 1)
    if name == "L1":
        return LSymbol(1, 1)
    m = re.fullmatch(r"L(\d+)_(\d)", name)
    if m:
        return LSymbol(int(m.group(1)), int(m.group(2)))
    raise MissingInputError(f"cannot interpret L-input name {name!r}")
