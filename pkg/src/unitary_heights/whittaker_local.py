"""Non-archimedean Whittaker functions W_{a,v}(s, 1, Phi_v) as rational functions of X = N^{-s}."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .lattice import (ALMOST_PI_MODULAR, DUAL_ALMOST_PI_MODULAR, DUAL_PI_MODULAR, IN_CLASS,
                      NOT_APPLICABLE, OUT_OF_CLASS, PI_MODULAR, SELF_DUAL, LatticeError,
                      lattice_model, lattice_volume, norm_class_representative)
from .numberfield import INERT, RAMIFIED, SPLIT, LocalPlaceData, local_log_derivative
from .symbolic_values import (RationalFunctionX, Surd, SymbolicValue, rf_derivative_at_s0,
                              rf_eval_at, rf_value_at_s0)

STANDARD, DUAL, SELF_DUAL_KIND = "standard", "dual", "self-dual"
SCHWARTZ_KINDS = (STANDARD, DUAL, SELF_DUAL_KIND)
NORM_CLASSES = (IN_CLASS, OUT_OF_CLASS, NOT_APPLICABLE)


class InvalidSpecError(ValueError):
    pass


class StabilizationError(RuntimeError):
    """The brute-force volume sequence did not become geometric below the truncation level."""


class UnsupportedCaseError(ValueError):
    pass


@dataclass(frozen=True)
class SchwartzChoice:
    kind: str = STANDARD

    def __post_init__(self):
        if self.kind not in SCHWARTZ_KINDS:
            raise InvalidSpecError(f"unknown Schwartz kind {self.kind!r}")


@dataclass(frozen=True)
class NormClass:
    tag: str = NOT_APPLICABLE

    def __post_init__(self):
        if self.tag not in NORM_CLASSES:
            raise InvalidSpecError(f"unknown norm class {self.tag!r}")


@dataclass(frozen=True)
class WhittakerSpec:
    place: LocalPlaceData
    n: int
    r: int
    schwartz: SchwartzChoice = SchwartzChoice()
    norm_class: NormClass = NormClass()

    def __post_init__(self):
        if isinstance(self.schwartz, str):
            object.__setattr__(self, "schwartz", SchwartzChoice(self.schwartz))
        if isinstance(self.norm_class, str):
            object.__setattr__(self, "norm_class", NormClass(self.norm_class))
        if self.n < 0:
            raise InvalidSpecError("n must be non-negative (n = 0 is the rank-1 case)")
        ramified_even = self.place.splitting == RAMIFIED and self.n % 2 == 0
        if ramified_even and self.r >= 0 and self.norm_class.tag == NOT_APPLICABLE:
            raise InvalidSpecError("ramified places with n even need a norm class")
        if not ramified_even and self.norm_class.tag != NOT_APPLICABLE:
            raise InvalidSpecError("norm class only applies at ramified places with n even")

    @property
    def kind(self) -> str:
        """Schwartz kind, with standard and self-dual identified off ramified places."""
        if self.place.splitting != RAMIFIED and self.schwartz.kind == SELF_DUAL_KIND:
            return STANDARD
        return self.schwartz.kind

    @property
    def is_zero(self) -> bool:
        if self.place.splitting == RAMIFIED:
            return self.r < 0
        return self.r < -self.place.e


# ---------------------------------------------------------------------------
# closed forms
# ---------------------------------------------------------------------------

def _const(value, N: int) -> RationalFunctionX:
    return RationalFunctionX.constant(value, N)


def _geometric(c: Fraction, N: int, terms: int) -> RationalFunctionX:
    """sum_{j < terms} (c X)^j."""
    return RationalFunctionX([c ** j for j in range(terms)] or [0], (1,), N)


def _product(N: int, n: int, r: int, alternating: bool) -> RationalFunctionX:
    """(1 -+ N^{-(n+1)} X) (1 - (+-N^{-n} X)^{r+1}) / (1 -+ N^{-n} X)."""
    sgn = -1 if alternating else 1
    Nf = Fraction(N)
    head = RationalFunctionX((1, -sgn * Nf ** -(n + 1)), (1,), N)
    return head * _geometric(sgn * Nf ** -n, N, r + 1)


def whittaker_closed_form(spec: WhittakerSpec) -> RationalFunctionX:
    place, n, r = spec.place, spec.n, spec.r
    N = place.N
    Nf = Fraction(N)
    if spec.is_zero:
        return _const(0, N)
    X = RationalFunctionX.x(N)
    if place.splitting in (SPLIT, INERT):
        e = place.e
        if r < 0:
            # only the correction summand survives: sum_{m <= r+e} (N X)^m
            return (_const(Surd.power(N, -e * (2 * n + 3)), N) * (1 - X)
                    * _geometric(Nf, N, r + e + 1))
        alternating = place.splitting == INERT and n % 2 == 0
        main = X ** e * _product(N, n, r, alternating)
        if e:
            main = main + (1 - X) * _geometric(Nf, N, e) * Nf ** -e
        return _const(Surd.power(N, -e * (2 * n + 1)), N) * main
    kind = spec.kind
    if n % 2 == 1:
        prod = _product(N, n, r, False)
        if kind == DUAL:
            return prod
        if kind == STANDARD:
            return prod - (1 - Nf ** -(n + 1))
        return prod - (1 - Nf ** -((n + 1) // 2))
    sign = 1 if spec.norm_class.tag == IN_CLASS else -1
    varying = RationalFunctionX.monomial(sign * Nf ** (-(r + 1) * n), r + 1, N)
    base = {STANDARD: Nf ** -n, DUAL: Fraction(1), SELF_DUAL_KIND: Nf ** -(n // 2)}[kind]
    return _const(Surd.power(N, -1), N) * (varying + base)


def whittaker_value(spec: WhittakerSpec, s) -> Surd:
    return rf_eval_at(whittaker_closed_form(spec), s)


def whittaker_derivative(spec: WhittakerSpec) -> SymbolicValue:
    """W'_{a,v}(0, 1, Phi_v)."""
    return rf_derivative_at_s0(whittaker_closed_form(spec))


def whittaker_deriv_combo(spec: WhittakerSpec) -> SymbolicValue:
    """W'(0) - (1/2) log|a| W(0) with log|a| = -r log N."""
    f = whittaker_closed_form(spec)
    w0 = rf_value_at_s0(f)
    return rf_derivative_at_s0(f) + SymbolicValue.log_of(spec.place.N) * (w0 * Fraction(spec.r, 2))


def local_l_ratio(spec: WhittakerSpec) -> SymbolicValue:
    """L'_v/L_v(n+1, eta_v^{n+1})."""
    return local_log_derivative(spec.place, spec.n + 1, spec.n + 1)


def S_term(spec: WhittakerSpec) -> SymbolicValue:
    """Derivative combination minus (-L'/L + log|d|) W(0): S_{a,n} plus any different correction."""
    w0 = whittaker_value(spec, 0)
    log_d = SymbolicValue.log_of(spec.place.N) * (-spec.place.e)
    return whittaker_deriv_combo(spec) - (log_d - local_l_ratio(spec)) * w0


def s_term_closed(place: LocalPlaceData, n: int, r: int, norm_class: str = NOT_APPLICABLE,
                  schwartz: str = "dual") -> SymbolicValue:
    """The displayed S_{a,n} at e_v = 0 (ramified: schwartz selects S or S^vee)."""
    N = Fraction(place.N)
    logN = SymbolicValue.log_of(place.N)
    if r < 0:
        return SymbolicValue()
    dpow = Surd.power(place.N, -place.e * (2 * n + 1))
    if place.splitting == SPLIT or (place.splitting == INERT and n % 2 == 1):
        pref = dpow * (1 - N ** -(n + 1)) / (2 * (1 - N ** -n) ** 2)
        return logN * pref * (r * (1 - N ** (-(r + 2) * n)) - (r + 2) * (N ** -n - N ** (-(r + 1) * n)))
    if place.splitting == INERT:
        sg = (-1) ** r
        pref = dpow * (1 + N ** -(n + 1)) / (2 * (1 + N ** -n) ** 2)
        return logN * pref * (r * (1 - sg * N ** (-(r + 2) * n)) + (r + 2) * (N ** -n - sg * N ** (-(r + 1) * n)))
    if n % 2 == 1:
        dual = logN * ((1 - N ** -(n + 1)) / (2 * (1 - N ** -n) ** 2)
                       * (r - (r + 2) * N ** -n + (r + 2) * N ** (-(r + 1) * n) - r * N ** (-(r + 2) * n)))
        if schwartz == DUAL:
            return dual
        if schwartz == STANDARD:
            return dual - logN * (Fraction(r, 2) * (1 - N ** -(n + 1))) + logN * N ** -(n + 1)
        raise UnsupportedCaseError("no displayed S-term for the self-dual Schwartz function")
    sign = -1 if norm_class == IN_CLASS else 1
    root = Surd.power(place.N, -1)
    if schwartz == STANDARD:
        return logN * root * (sign * Fraction(r + 2, 2) * N ** (-(r + 1) * n) + Fraction(r, 2) * N ** -n)
    if schwartz == DUAL:
        return logN * root * (sign * Fraction(r + 2, 2) * N ** (-(r + 1) * n) + Fraction(r, 2))
    raise UnsupportedCaseError("no displayed S-term for the self-dual Schwartz function")


def different_correction(spec: WhittakerSpec) -> SymbolicValue:
    """S_term minus the displayed S_{a,n} (nonzero only when e_v > 0)."""
    return S_term(spec) - s_term_closed(spec.place, spec.n, spec.r, spec.norm_class.tag, spec.kind)


# ---------------------------------------------------------------------------
# brute force via the volume formula
# ---------------------------------------------------------------------------

def _lattice_kind(spec: WhittakerSpec) -> str:
    if spec.place.splitting != RAMIFIED or spec.kind == SELF_DUAL_KIND:
        return SELF_DUAL
    odd = spec.n % 2 == 1
    if spec.kind == STANDARD:
        return PI_MODULAR if odd else ALMOST_PI_MODULAR
    return DUAL_PI_MODULAR if odd else DUAL_ALMOST_PI_MODULAR


def whittaker_model(spec: WhittakerSpec, M: int):
    return lattice_model(spec.place, spec.n, _lattice_kind(spec), M)


def shell_fraction(spec: WhittakerSpec, model, a: int, k: int) -> Fraction:
    """Proportion of x in Lambda with q(x) in a + p^k O (k may be <= 0)."""
    if k <= 0:
        return Fraction(1 if spec.r >= k else 0)
    if spec.r < 0:
        return Fraction(0)
    return Fraction(model.count(a, k), model.p ** (k * model.dim_F))


def whittaker_bruteforce_function(spec: WhittakerSpec, truncation: int | None = None,
                                  max_raise: int = 3) -> RationalFunctionX:
    """W as a rational function in X from lattice-point counts modulo p^k.

    W = |d|^{1/2} vol(Lambda) (1 - X) sum_m (N X)^m frac(m - e),
    where frac(k) is the proportion of Lambda with q(x) = a mod p^k.  Once
    N^m frac(m - e) is constant the tail sums to c X^{m0}.
    """
    place = spec.place
    N = place.N
    if place.N != place.p:
        raise UnsupportedCaseError("brute force needs a prime residue field")
    if spec.is_zero:
        return _const(0, N)
    e, r = place.e, spec.r
    M = truncation if truncation is not None else r + e + 3
    if M < r + 3:
        raise InvalidSpecError("truncation level must be at least r + 3")
    model = whittaker_model(spec, M)
    vol = model.volume()
    if vol != lattice_volume(model):
        raise LatticeError(f"Gram volume {vol} disagrees with closed form {lattice_volume(model)}")
    a = norm_class_representative(place, spec.n, max(r, 0), spec.norm_class.tag)
    start = max(r + e + 1, 0)
    limit = M + e + max_raise
    g: list[Fraction] = []
    m0 = None
    m = 0
    while True:
        g.append(Fraction(N) ** m * shell_fraction(spec, model, a, m - e))
        if m >= start + 2 and g[m] == g[m - 1] == g[m - 2] and m - 2 >= start:
            m0 = m - 2
            break
        m += 1
        if m - e > limit:
            raise StabilizationError(f"no geometric tail up to level {limit}")
    series = RationalFunctionX(g[:m0] or [0], (1,), N)
    tail = RationalFunctionX.monomial(g[m0], m0, N)
    X = RationalFunctionX.x(N)
    scale = Surd.power(N, -e) * vol
    return _const(scale, N) * ((1 - X) * series + tail)


def whittaker_bruteforce(spec: WhittakerSpec, s, truncation: int | None = None) -> Surd:
    return rf_eval_at(whittaker_bruteforce_function(spec, truncation), s)


# ---------------------------------------------------------------------------
# induction on the rank
# ---------------------------------------------------------------------------

def induction_coefficients(spec: WhittakerSpec, upto: int) -> list[Fraction]:
    """C^r_m for m <= upto."""
    place, r = spec.place, spec.r
    N = Fraction(place.N)
    q = 1 - 1 / N
    out = []
    if place.splitting == SPLIT:
        below = sum(((j + 1) * q * q * N ** -j for j in range(r + 1)), Fraction(0))
        for m in range(upto + 1):
            if m < r:
                out.append((m + 1) * q * q * N ** -m)
            elif m == r:
                out.append(1 - below + (r + 1) * q * q * N ** -r * (N - 2) / (N - 1))
            else:
                out.append((r + 1) * q * q * N ** -m)
        return out
    if place.splitting == RAMIFIED and spec.n % 2 == 0:
        for m in range(upto + 1):
            if m < r:
                c = N ** -m - N ** -(m + 1)
            elif spec.norm_class.tag == OUT_OF_CLASS:
                c = N ** -r if m == r else Fraction(0)
            else:
                c = N ** -r - 2 * N ** -(r + 1) if m == r else 2 * N ** -m - 2 * N ** -(m + 1)
            out.append(c)
        return out
    raise UnsupportedCaseError("coefficient tables exist for split places and ramified even n")


def _tail_sum(c: Fraction, ratio: Fraction, start: int, lower: WhittakerSpec) -> RationalFunctionX:
    """sum_{m >= start} c ratio^m W^{lower}_{p^m}, using W_{p^m} = alpha + beta tau^m."""
    N = lower.place.N
    n = lower.n
    Nf = Fraction(N)
    w0 = whittaker_closed_form(_with_r(lower, start))
    w1 = whittaker_closed_form(_with_r(lower, start + 1))
    tau = RationalFunctionX.monomial(Nf ** -n, 1, N)
    # W_m = alpha + beta tau^m: solve from m = start, start + 1
    beta_t = (w1 - w0) / (tau - 1)          # beta tau^start
    alpha = w0 - beta_t
    first = c * ratio ** start
    geo_alpha = alpha * first / (1 - ratio)
    geo_beta = beta_t * first / (1 - tau * ratio)
    return geo_alpha + geo_beta


def _with_r(spec: WhittakerSpec, r: int) -> WhittakerSpec:
    return WhittakerSpec(spec.place, spec.n, r, spec.schwartz, NormClass(NOT_APPLICABLE))


def whittaker_induction(spec: WhittakerSpec) -> RationalFunctionX:
    """W_{a} = ratio * sum_m C^r_m W^{(n-1)}_{p^m}."""
    place, n, r = spec.place, spec.n, spec.r
    N = place.N
    if r < 0:
        raise UnsupportedCaseError("induction tables need r >= 0")
    if place.splitting == SPLIT:
        if place.e:
            raise UnsupportedCaseError("split induction table assumes e_v = 0")
        lower = WhittakerSpec(place, n - 1, 0)
        ratio = Surd(1)
    elif place.splitting == RAMIFIED and n % 2 == 0:
        lower = WhittakerSpec(place, n - 1, 0, spec.schwartz)
        ratio = Surd.power(N, -1)
    else:
        raise UnsupportedCaseError("coefficient tables exist for split places and ramified even n")
    coeffs = induction_coefficients(spec, r + 1)
    total = _const(0, N)
    for m in range(r + 1):
        total = total + whittaker_closed_form(_with_r(lower, m)) * coeffs[m]
    if place.splitting == SPLIT:
        total = total + _tail_sum((r + 1) * (1 - Fraction(1, N)) ** 2, Fraction(1, N), r + 1, lower)
    elif spec.norm_class.tag == IN_CLASS:
        total = total + _tail_sum(2 * (1 - Fraction(1, N)), Fraction(1, N), r + 1, lower)
    return _const(ratio, N) * total


# ---------------------------------------------------------------------------
# intertwining and multiplicity
# ---------------------------------------------------------------------------

def c_intertwining(place: LocalPlaceData, n: int, y_in_support: bool) -> SymbolicValue:
    """c_{Phi_v}(1, y) for the chosen lattice Schwartz function."""
    if not y_in_support:
        return SymbolicValue()
    logN = SymbolicValue.log_of(place.N)
    out = logN * (-place.e)
    if place.splitting == INERT:
        d = place.abs_d
        N = Fraction(place.N)
        out = out + logN * (2 * (d - 1) / ((1 + 1 / N) * (1 - N)))
    return out


def multiplicity_m(place: LocalPlaceData, v_q_y2: int, y1_in_perp: bool, q_y2_integral: bool) -> int:
    if place.splitting == SPLIT:
        raise InvalidSpecError("multiplicity is defined at nonsplit places")
    if not (y1_in_perp and q_y2_integral) or v_q_y2 < 0:
        return 0
    return v_q_y2 + 1


def rank_one_k_value(place: LocalPlaceData, r: int) -> SymbolicValue:
    """k_{Phi_v}(1, y) at an inert place from the rank-1 Whittaker derivative.

    k = L(1, eta_v) W'_{a}(0) / vol(E^1_v) with L(1, eta_v) = (1 + N^{-1})^{-1}
    and vol(E^1_v) = 1.
    """
    if place.splitting != INERT or place.e:
        raise UnsupportedCaseError("rank-1 k-values are implemented at inert places with e_v = 0")
    N = Fraction(place.N)
    w = whittaker_closed_form(WhittakerSpec(place, 0, r))
    return rf_derivative_at_s0(w) / (1 + 1 / N)
