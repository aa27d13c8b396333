"""Exact value algebra.

Three layers:

* ``Surd``: elements of the Q-span of square roots of squarefree integers.
  Half-integral powers of a residue cardinality (N^{-1/2}, |d|^{n+1/2}) live here.
* ``RationalFunctionX``: sqrt(k) * P(X)/Q(X) with P, Q integer polynomials,
  where X stands for N^{-s}.
* ``SymbolicValue``: linear combinations of 1, log p, log pi and Euler's gamma
  with ``Surd`` coefficients.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from numbers import Rational
from typing import Iterable, Mapping, Sequence

import mpmath
from sympy import Poly, QQ, Symbol, factorint

X_SYMBOL = Symbol("X")


class PoleError(ArithmeticError):
    """Raised when a rational function is evaluated at a zero of its denominator."""


@lru_cache(maxsize=4096)
def squarefree_split(m: int) -> tuple[int, int]:
    """Return (c, k) with m = c^2 * k and k squarefree (m > 0)."""
    if m <= 0:
        raise ValueError("squarefree_split needs a positive integer")
    c, k = 1, 1
    for p, e in factorint(m).items():
        c *= p ** (e // 2)
        if e % 2:
            k *= p
    return c, k


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    raise TypeError(f"expected an exact rational, got {type(x).__name__}")


class Surd:
    """Finite sum  sum_k c_k sqrt(k)  over squarefree k >= 1 with rational c_k."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms=None):
        if terms is not None and not isinstance(terms, Mapping):
            terms = {1: terms}
        clean = {}
        for k, c in (terms or {}).items():
            c = _as_fraction(c)
            if c:
                clean[int(k)] = clean.get(int(k), 0) + c
        self._terms = {k: c for k, c in sorted(clean.items()) if c}
        self._hash = None

    # construction helpers
    @classmethod
    def coerce(cls, x) -> "Surd":
        if isinstance(x, Surd):
            return x
        return cls({1: _as_fraction(x)})

    @classmethod
    def sqrt(cls, q) -> "Surd":
        """Exact square root of a non-negative rational."""
        q = _as_fraction(q)
        if q < 0:
            raise ValueError("square root of a negative rational")
        if q == 0:
            return cls()
        c, k = squarefree_split(q.numerator * q.denominator)
        return cls({k: Fraction(c, q.denominator)})

    @classmethod
    def power(cls, base: int, twice_exponent: int) -> "Surd":
        """base ** (twice_exponent / 2) exactly."""
        whole, half = divmod(twice_exponent, 2)
        value = Fraction(base) ** whole
        if half:
            return cls.sqrt(base) * value
        return cls({1: value})

    # inspection
    @property
    def terms(self) -> dict[int, Fraction]:
        return dict(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def is_rational(self) -> bool:
        return set(self._terms) <= {1}

    def rational(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is irrational")
        return self._terms.get(1, Fraction(0))

    def single_root(self) -> tuple[int, Fraction]:
        """(k, c) when the value is c*sqrt(k); zero maps to (1, 0)."""
        if not self._terms:
            return 1, Fraction(0)
        if len(self._terms) != 1:
            raise ValueError(f"{self} mixes several square roots")
        (k, c), = self._terms.items()
        return k, c

    def to_mpf(self, dps: int = 30):
        with mpmath.workdps(dps):
            return mpmath.fsum(mpmath.mpf(c.numerator) / c.denominator * mpmath.sqrt(k)
                               for k, c in self._terms.items())

    def __float__(self):
        return float(self.to_mpf(20))

    # arithmetic
    def __add__(self, other):
        other = Surd.coerce(other)
        t = dict(self._terms)
        for k, c in other._terms.items():
            t[k] = t.get(k, 0) + c
        return Surd(t)

    __radd__ = __add__

    def __neg__(self):
        return Surd({k: -c for k, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-Surd.coerce(other))

    def __rsub__(self, other):
        return Surd.coerce(other) - self

    def __mul__(self, other):
        other = Surd.coerce(other)
        t: dict[int, Fraction] = {}
        for k1, c1 in self._terms.items():
            for k2, c2 in other._terms.items():
                c, k = squarefree_split(k1 * k2)
                t[k] = t.get(k, 0) + c1 * c2 * c
        return Surd(t)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = Surd.coerce(other)
        k, c = other.single_root()
        if c == 0:
            raise ZeroDivisionError("division by zero surd")
        # 1/(c sqrt k) = sqrt(k) / (c k)
        return self * Surd({k: 1 / (c * k)})

    def __pow__(self, e: int):
        if e < 0:
            return Surd(1) / (self ** -e)
        out = Surd(1)
        for _ in range(e):
            out = out * self
        return out

    def __eq__(self, other):
        try:
            other = Surd.coerce(other)
        except TypeError:
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(tuple(self._terms.items()))
        return self._hash

    def __bool__(self):
        return bool(self._terms)

    def __repr__(self):
        if not self._terms:
            return "0"
        parts = []
        for k, c in self._terms.items():
            parts.append(str(c) if k == 1 else f"{c}*sqrt({k})")
        return " + ".join(parts)


ONE = Surd(1)
ZERO = Surd()


# ---------------------------------------------------------------------------
# rational functions in X = N^{-s}
# ---------------------------------------------------------------------------

def _poly(coeffs: Sequence) -> Poly:
    """Poly over QQ from low-to-high coefficients."""
    return Poly(list(reversed([QQ(int(Fraction(c).numerator), int(Fraction(c).denominator))
                               for c in coeffs])) or [QQ(0)], X_SYMBOL, domain=QQ)


class RationalFunctionX:
    """sqrt(root) * numerator(X) / denominator(X), reduced, in X = base^{-s}.

    Coefficient tuples run from the constant term upward.  The pair is stored
    coprime, with jointly primitive integer coefficients and a positive leading
    denominator coefficient.  The zero function has root 1.
    """

    __slots__ = ("numerator", "denominator", "base", "root")

    def __init__(self, numerator: Sequence, denominator: Sequence = (1,), base: int = 2,
                 root: int = 1):
        if base < 2:
            raise ValueError("base must be >= 2")
        if root < 1 or squarefree_split(root)[0] != 1:
            raise ValueError("root must be a squarefree positive integer")
        p, q = _poly(numerator), _poly(denominator)
        if q.is_zero:
            raise ZeroDivisionError("zero denominator polynomial")
        self.base = base
        self._set(p, q, root)

    def _set(self, p: Poly, q: Poly, root: int):
        if p.is_zero:
            self.numerator, self.denominator, self.root = (0,), (1,), 1
            return
        g = p.gcd(q)
        p, q = p.quo(g), q.quo(g)
        lc = q.LC()
        num = [_frac(c) / _frac(lc) for c in reversed(p.all_coeffs())]
        den = [_frac(c) / _frac(lc) for c in reversed(q.all_coeffs())]
        lcm = 1
        for c in num + den:
            lcm = lcm * c.denominator // _gcd(lcm, c.denominator)
        num_i = [int(c * lcm) for c in num]
        den_i = [int(c * lcm) for c in den]
        content = 0
        for c in num_i + den_i:
            content = _gcd(content, c)
        self.numerator = tuple(c // content for c in num_i)
        self.denominator = tuple(c // content for c in den_i)
        self.root = root

    @classmethod
    def _from_polys(cls, p: Poly, q: Poly, base: int, root: int) -> "RationalFunctionX":
        obj = cls.__new__(cls)
        obj.base = base
        if q.is_zero:
            raise ZeroDivisionError("zero denominator polynomial")
        obj._set(p, q, root)
        return obj

    # constructors
    @classmethod
    def constant(cls, value, base: int) -> "RationalFunctionX":
        value = Surd.coerce(value)
        k, c = value.single_root()
        return cls((c,), (1,), base, k)

    @classmethod
    def monomial(cls, coeff, degree: int, base: int) -> "RationalFunctionX":
        """coeff * X^degree; negative degrees go to the denominator."""
        coeff = Surd.coerce(coeff)
        k, c = coeff.single_root()
        if degree >= 0:
            return cls([0] * degree + [c], (1,), base, k)
        return cls((c,), [0] * (-degree) + [1], base, k)

    @classmethod
    def x(cls, base: int) -> "RationalFunctionX":
        return cls.monomial(1, 1, base)

    # polys
    @property
    def num_poly(self) -> Poly:
        return _poly(self.numerator)

    @property
    def den_poly(self) -> Poly:
        return _poly(self.denominator)

    def is_zero(self) -> bool:
        return self.numerator == (0,)

    def is_constant(self) -> bool:
        return len(self.numerator) == 1 and len(self.denominator) == 1

    def _check(self, other: "RationalFunctionX"):
        if self.base != other.base:
            raise ValueError(f"bases differ: {self.base} vs {other.base}")

    def _lift(self, other) -> "RationalFunctionX":
        if isinstance(other, RationalFunctionX):
            self._check(other)
            return other
        return RationalFunctionX.constant(other, self.base)

    # arithmetic
    def __add__(self, other):
        other = self._lift(other)
        if other.is_zero():
            return self
        if self.is_zero():
            return other
        if self.root != other.root:
            raise ValueError("cannot add rational functions carrying different square roots")
        p = self.num_poly * other.den_poly + other.num_poly * self.den_poly
        q = self.den_poly * other.den_poly
        return RationalFunctionX._from_polys(p, q, self.base, self.root)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunctionX._from_polys(-self.num_poly, self.den_poly, self.base, self.root)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        other = self._lift(other)
        c, k = squarefree_split(self.root * other.root)
        p = self.num_poly * other.num_poly * QQ(c)
        return RationalFunctionX._from_polys(p, self.den_poly * other.den_poly, self.base, k)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._lift(other)
        if other.is_zero():
            raise ZeroDivisionError("division by the zero function")
        # 1/sqrt(k) = sqrt(k)/k
        c, k = squarefree_split(self.root * other.root)
        p = self.num_poly * other.den_poly * QQ(c)
        q = self.den_poly * other.num_poly * QQ(other.root)
        return RationalFunctionX._from_polys(p, q, self.base, k)

    def __rtruediv__(self, other):
        return self._lift(other) / self

    def __pow__(self, e: int):
        if e < 0:
            return RationalFunctionX.constant(1, self.base) / self ** (-e)
        out = RationalFunctionX.constant(1, self.base)
        for _ in range(e):
            out = out * self
        return out

    def __eq__(self, other):
        if not isinstance(other, RationalFunctionX):
            try:
                other = self._lift(other)
            except (TypeError, ValueError):
                return NotImplemented
        return (self.base, self.root, self.numerator, self.denominator) == \
            (other.base, other.root, other.numerator, other.denominator)

    def __hash__(self):
        return hash((self.base, self.root, self.numerator, self.denominator))

    def reduced(self) -> "RationalFunctionX":
        return RationalFunctionX(self.numerator, self.denominator, self.base, self.root)

    def evaluate_x(self, x) -> Surd:
        """Value at an exact rational X."""
        x = _as_fraction(x)
        den = sum(Fraction(c) * x ** i for i, c in enumerate(self.denominator))
        if den == 0:
            raise PoleError(f"denominator vanishes at X={x}")
        num = sum(Fraction(c) * x ** i for i, c in enumerate(self.numerator))
        return Surd({self.root: num / den})

    def __repr__(self):
        def fmt(cs):
            terms = [f"{c}*X^{i}" if i else str(c) for i, c in enumerate(cs) if c]
            return " + ".join(terms) or "0"
        pre = f"sqrt({self.root})*" if self.root != 1 else ""
        return f"RationalFunctionX[N={self.base}]({pre}({fmt(self.numerator)})/({fmt(self.denominator)}))"


def _frac(c) -> Fraction:
    return Fraction(int(c.numerator), int(c.denominator))


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return abs(a)


def rf_eval_at(f: RationalFunctionX, s) -> Surd:
    """f with X = N^{-s}; s must be an integer for an exact answer."""
    s = _as_fraction(s)
    if s.denominator != 1:
        raise ValueError("exact evaluation needs an integer s; use rf_eval_numeric")
    return f.evaluate_x(Fraction(f.base) ** (-int(s)))


def rf_eval_numeric(f: RationalFunctionX, s, dps: int = 30):
    """High-precision value of f at a real s."""
    with mpmath.workdps(dps):
        if isinstance(s, Fraction):
            s = mpmath.mpf(s.numerator) / s.denominator
        x = mpmath.power(f.base, -mpmath.mpf(s))
        num = mpmath.polyval(list(reversed([mpmath.mpf(c) for c in f.numerator])), x)
        den = mpmath.polyval(list(reversed([mpmath.mpf(c) for c in f.denominator])), x)
        if den == 0:
            raise PoleError(f"denominator vanishes at s={s}")
        return mpmath.sqrt(f.root) * num / den


def rf_derivative_at_s0(f: RationalFunctionX) -> "SymbolicValue":
    """d/ds f(N^{-s}) at s = 0, i.e. -f'(1) log N."""
    p, q = f.num_poly, f.den_poly
    q1 = q.eval(1)
    if q1 == 0:
        raise PoleError("pole at X=1")
    dp = p.diff(X_SYMBOL).eval(1)
    dq = q.diff(X_SYMBOL).eval(1)
    deriv = (dp * q1 - p.eval(1) * dq) / q1 ** 2
    coeff = Surd({f.root: -Fraction(int(deriv.numerator), int(deriv.denominator))})
    return SymbolicValue.log_of(f.base) * coeff


def rf_value_at_s0(f: RationalFunctionX) -> Surd:
    return f.evaluate_x(1)


# ---------------------------------------------------------------------------
# symbolic values
# ---------------------------------------------------------------------------

RATIONAL = "1"
LOG_PI = "log_pi"
EULER = "gamma"


class SymbolicValue:
    """Exact combination of 1, log p (p prime), log pi and gamma."""

    __slots__ = ("_coeffs",)

    def __init__(self, coeffs: Mapping | None = None):
        clean: dict = {}
        for key, c in (coeffs or {}).items():
            c = Surd.coerce(c)
            if key not in (RATIONAL, LOG_PI, EULER) and not isinstance(key, int):
                raise KeyError(f"unknown symbol {key!r}")
            total = clean.get(key, ZERO) + c
            clean[key] = total
        self._coeffs = {k: v for k, v in clean.items() if not v.is_zero()}

    # constructors
    @classmethod
    def rational(cls, q) -> "SymbolicValue":
        return cls({RATIONAL: q})

    @classmethod
    def log_of(cls, m) -> "SymbolicValue":
        """log of a positive rational, expanded over primes."""
        m = _as_fraction(m)
        if m <= 0:
            raise ValueError("log of a non-positive number")
        coeffs: dict = {}
        for p, e in factorint(m.numerator).items():
            coeffs[int(p)] = coeffs.get(int(p), 0) + e
        for p, e in factorint(m.denominator).items():
            coeffs[int(p)] = coeffs.get(int(p), 0) - e
        return cls(coeffs)

    @classmethod
    def log_pi(cls) -> "SymbolicValue":
        return cls({LOG_PI: 1})

    @classmethod
    def euler_gamma(cls) -> "SymbolicValue":
        return cls({EULER: 1})

    # field accessors
    @property
    def rational_part(self) -> Surd:
        return self._coeffs.get(RATIONAL, ZERO)

    @property
    def log_coefficients(self) -> dict[int, Surd]:
        return {k: v for k, v in self._coeffs.items() if isinstance(k, int)}

    @property
    def pi_log_coefficient(self) -> Surd:
        return self._coeffs.get(LOG_PI, ZERO)

    @property
    def euler_coefficient(self) -> Surd:
        return self._coeffs.get(EULER, ZERO)

    def coefficient(self, key) -> Surd:
        return self._coeffs.get(key, ZERO)

    def items(self):
        return self._coeffs.items()

    def is_zero(self) -> bool:
        return not self._coeffs

    # arithmetic
    def __add__(self, other):
        other = _as_sv(other)
        merged = dict(self._coeffs)
        for k, v in other._coeffs.items():
            merged[k] = merged.get(k, ZERO) + v
        return SymbolicValue(merged)

    __radd__ = __add__

    def __neg__(self):
        return SymbolicValue({k: -v for k, v in self._coeffs.items()})

    def __sub__(self, other):
        return self + (-_as_sv(other))

    def __rsub__(self, other):
        return _as_sv(other) - self

    def __mul__(self, c):
        if isinstance(c, SymbolicValue):
            if set(c._coeffs) <= {RATIONAL}:
                c = c.rational_part
            elif set(self._coeffs) <= {RATIONAL}:
                return c * self.rational_part
            else:
                raise TypeError("product of two transcendental symbolic values")
        c = Surd.coerce(c)
        return SymbolicValue({k: v * c for k, v in self._coeffs.items()})

    __rmul__ = __mul__

    def __truediv__(self, c):
        c = Surd.coerce(c)
        return SymbolicValue({k: v / c for k, v in self._coeffs.items()})

    def __eq__(self, other):
        try:
            other = _as_sv(other)
        except TypeError:
            return NotImplemented
        return self._coeffs == other._coeffs

    def __hash__(self):
        return hash(tuple(sorted(((str(k), v) for k, v in self._coeffs.items()),
                                 key=lambda kv: kv[0])))

    def __repr__(self):
        if not self._coeffs:
            return "0"
        parts = []
        for k in sorted(self._coeffs, key=lambda k: (not isinstance(k, str), str(k))):
            c = self._coeffs[k]
            name = {RATIONAL: "", LOG_PI: "log(pi)", EULER: "gamma"}.get(k, f"log({k})")
            parts.append(f"({c})" + (f"*{name}" if name else ""))
        return " + ".join(parts)

    def to_numeric(self, precision: int = 15):
        return sv_to_numeric(self, precision)


def _as_sv(x) -> SymbolicValue:
    if isinstance(x, SymbolicValue):
        return x
    return SymbolicValue.rational(Surd.coerce(x))


def sv_combine(values: Sequence[SymbolicValue], coefficients: Sequence) -> SymbolicValue:
    """Exact linear combination sum c_i v_i."""
    if len(values) != len(coefficients):
        raise ValueError("values and coefficients differ in length")
    out = SymbolicValue()
    for v, c in zip(values, coefficients):
        out = out + _as_sv(v) * c
    return out


def sv_to_numeric(v: SymbolicValue, precision: int = 15):
    """mpmath real with absolute error below 10^-precision."""
    if precision < 1:
        raise ValueError("precision must be >= 1")
    dps = precision + 15
    with mpmath.workdps(dps):
        total = mpmath.mpf(0)
        for key, c in v.items():
            coeff = c.to_mpf(dps)
            if key == RATIONAL:
                total += coeff
            elif key == LOG_PI:
                total += coeff * mpmath.log(mpmath.pi)
            elif key == EULER:
                total += coeff * mpmath.euler
            else:
                total += coeff * mpmath.log(key)
        return +total


def sum_values(values: Iterable[SymbolicValue]) -> SymbolicValue:
    out = SymbolicValue()
    for v in values:
        out = out + v
    return out
