"""p-adic Hermitian lattices: finite models, vector types, orbit counts and the f/B series.

A lattice over O_E of rank n+1 is modelled as an orthogonal sum of binary
quadratic forms over O_F = Z_p (F-coordinates), truncated modulo p^k.  Value
distributions are class functions on Z/p^k for the action of unit squares,
so sums of components are convolved class-by-class rather than point-by-point.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from .numberfield import INERT, RAMIFIED, SPLIT, LocalPlaceData
from .symbolic_values import Surd, SymbolicValue, sum_values

SELF_DUAL = "self-dual"
PI_MODULAR = "pi-modular"
ALMOST_PI_MODULAR = "almost-pi-modular"
DUAL_PI_MODULAR = "dual-of-pi-modular"
DUAL_ALMOST_PI_MODULAR = "dual-of-almost-pi-modular"
LATTICE_KINDS = (SELF_DUAL, PI_MODULAR, ALMOST_PI_MODULAR, DUAL_PI_MODULAR,
                 DUAL_ALMOST_PI_MODULAR)

IN_CLASS, OUT_OF_CLASS, NOT_APPLICABLE = "in-class", "out-of-class", "not-applicable"

INF = 10 ** 6   # stands in for the valuation of 0 in label coordinates


class LatticeError(ValueError):
    """Invalid lattice data or type request."""


class TruncationError(LatticeError):
    """Valuations saturate the truncation level."""


# ---------------------------------------------------------------------------
# residue rings Z/p^k and unit-square classes
# ---------------------------------------------------------------------------

def valuation(t: int, p: int, cap: int = INF) -> int:
    if t == 0:
        return cap
    v = 0
    while t % p == 0:
        t //= p
        v += 1
    return v


def least_nonsquare(p: int) -> int:
    for c in range(2, p):
        if pow(c, (p - 1) // 2, p) == p - 1:
            return c
    raise LatticeError(f"no non-square mod {p}")


class ResidueRing:
    """Z/p^k with valuations and the partition into unit-square orbits."""

    def __init__(self, p: int, k: int):
        if k < 1:
            raise LatticeError("level must be >= 1")
        self.p, self.k, self.size = p, k, p ** k
        t = np.arange(self.size, dtype=np.int64)
        v = np.zeros(self.size, dtype=np.int64)
        for j in range(1, k + 1):
            v[t % p ** j == 0] = j
        self.val = v
        labels = np.zeros(self.size, dtype=np.int64)
        reps = [0]
        index: dict[tuple, int] = {}
        unit = t // np.power(p, np.minimum(v, k - 1).astype(np.int64))
        for x in range(1, self.size):
            vv = int(v[x])
            u = int(unit[x])
            if p == 2:
                key = (vv, u % (2 ** min(k - vv, 3)))
            else:
                key = (vv, pow(u % p, (p - 1) // 2, p) == 1)
            if key not in index:
                index[key] = len(reps)
                reps.append(x)
            labels[x] = index[key]
        self.labels = labels
        self.reps = reps
        self.n_classes = len(reps)
        self.class_sizes = np.bincount(labels, minlength=self.n_classes)

    def class_of(self, t: int) -> int:
        return int(self.labels[t % self.size])

    @property
    def triple_table(self) -> np.ndarray:
        """T[C, A, B] = #{c1 in A : c - c1 in B} for the representative c of C."""
        if not hasattr(self, "_triple"):
            nc = self.n_classes
            T = np.zeros((nc, nc, nc), dtype=np.int64)
            c1 = np.arange(self.size, dtype=np.int64)
            la = self.labels
            for C, c in enumerate(self.reps):
                lb = self.labels[(c - c1) % self.size]
                T[C] = np.bincount(la * nc + lb, minlength=nc * nc).reshape(nc, nc)
            self._triple = T
        return self._triple


@lru_cache(maxsize=64)
def residue_ring(p: int, k: int) -> ResidueRing:
    return ResidueRing(p, k)


# ---------------------------------------------------------------------------
# binary components
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BinaryForm:
    """q(x, y) = A x^2 + B x y + C y^2 on two F-coordinates.

    ``coords`` gives, per label coordinate, a tuple of terms (var, mult, offset);
    the coordinate value is min over terms of mult * v(var) + offset.
    Coordinates a component does not touch are INF.
    """

    A: int
    B: int
    C: int
    coords: tuple[tuple[tuple[int, int, int], ...], ...]
    name: str = ""

    def gram(self) -> np.ndarray:
        """Gram matrix of the bilinear form q(x+y) - q(x) - q(y)."""
        return np.array([[2 * self.A, self.B], [self.B, 2 * self.C]], dtype=object)

    def value(self, x, y):
        return self.A * x * x + self.B * x * y + self.C * y * y

    def diagonal_atoms(self, p: int) -> list[int]:
        """Coefficients c_i with q isometric to sum c_i z_i^2 over Z_p (p odd)."""
        if p == 2:
            raise LatticeError("diagonalisation needs odd p")
        if self.B == 0:
            return [self.A, self.C]
        if self.A == 0 and self.C == 0:
            # B xy = B ((x+y)/2)^2 - B ((x-y)/2)^2
            return [self.B, -self.B]
        raise LatticeError("general binary forms are not needed")


def _coordinate_values(form: BinaryForm, vx: np.ndarray, vy: np.ndarray) -> list[np.ndarray]:
    out = []
    for terms in form.coords:
        best = None
        for var, mult, off in terms:
            vals = (vx if var == 0 else vy) * mult + off
            best = vals if best is None else np.minimum(best, vals)
        out.append(best)
    return out


def _atom_histogram(ring: ResidueRing, c: int) -> np.ndarray:
    z = np.arange(ring.size, dtype=np.int64)
    vals = (c % ring.size) * (z * z % ring.size) % ring.size
    return np.bincount(vals, minlength=ring.size)


def _to_class_vector(ring: ResidueRing, hist: np.ndarray) -> list[int]:
    """Per-element counts by class, checking that hist is a class function."""
    out = []
    for C, rep in enumerate(ring.reps):
        members = hist[ring.labels == C]
        if members.min() != members.max():
            raise LatticeError("value histogram is not constant on unit-square classes")
        out.append(int(members[0]))
    return out


def convolve_classes(ring: ResidueRing, h1: Sequence[int], h2: Sequence[int]) -> list[int]:
    """Exact class-level convolution of two class functions on Z/p^k."""
    T = ring.triple_table
    nc = ring.n_classes
    out = []
    for C in range(nc):
        total = 0
        TC = T[C]
        for A in range(nc):
            if not h1[A]:
                continue
            row = TC[A]
            s = 0
            for B in range(nc):
                if row[B] and h2[B]:
                    s += int(row[B]) * h2[B]
            total += h1[A] * s
        out.append(total)
    return out


@lru_cache(maxsize=512)
def component_counts(p: int, k: int, form: BinaryForm) -> tuple[int, ...]:
    """#{(x, y) mod p^k : q(x, y) = t} as a class vector."""
    ring = residue_ring(p, k)
    if p != 2:
        atoms = form.diagonal_atoms(p)
        h = _to_class_vector(ring, _atom_histogram(ring, atoms[0]))
        for c in atoms[1:]:
            h = convolve_classes(ring, h, _to_class_vector(ring, _atom_histogram(ring, c)))
        return tuple(h)
    z = np.arange(ring.size, dtype=np.int64)
    hist = np.zeros(ring.size, dtype=np.int64)
    for x in range(ring.size):
        vals = form.value(x, z) % ring.size
        hist += np.bincount(vals, minlength=ring.size)
    return tuple(_to_class_vector(ring, hist))


@lru_cache(maxsize=512)
def component_presence(p: int, k: int, form: BinaryForm) -> frozenset:
    """Set of (value class, label tuple) attained by the component mod p^k."""
    ring = residue_ring(p, k)
    size = ring.size
    z = np.arange(size, dtype=np.int64)
    vz = ring.val
    found: set = set()
    block = max(1, 2_000_000 // size)
    for start in range(0, size, block):
        xs = np.arange(start, min(size, start + block), dtype=np.int64)
        X = np.repeat(xs, size)
        Y = np.tile(z, len(xs))
        vals = form.value(X, Y) % size
        cls = ring.labels[vals]
        coords = _coordinate_values(form, vz[X], vz[Y])
        stacked = np.stack([cls] + coords, axis=1)
        for row in np.unique(stacked, axis=0):
            found.add((int(row[0]), tuple(int(c) for c in row[1:])))
    return frozenset(found)


def combine_presence(ring: ResidueRing, s1: Iterable, s2: Iterable) -> set:
    T = ring.triple_table
    nc = ring.n_classes
    reach = {}
    for A in range(nc):
        for B in range(nc):
            reach[A, B] = [C for C in range(nc) if T[C, A, B]]
    out = set()
    s2 = list(s2)
    for A, l1 in s1:
        for B, l2 in s2:
            lab = tuple(min(a, b) for a, b in zip(l1, l2))
            for C in reach[A, B]:
                out.add((C, lab))
    return out


# standard pieces ------------------------------------------------------------

def hyperbolic_pair() -> BinaryForm:
    return BinaryForm(0, 1, 0, (((0, 1, 0),), ((1, 1, 0),)), "pair")


def norm_form(p: int, scale: int = 1) -> BinaryForm:
    """Norm form of the unramified quadratic extension, as a quadratic form over Z_p."""
    depth = (((0, 1, 0), (1, 1, 0)),)
    if p == 2:
        return BinaryForm(scale, -scale, scale, depth, "norm")
    return BinaryForm(scale, 0, -scale * least_nonsquare(p), depth, "norm")


def _pi_depth_coords(first_odd: bool, shift_lattice: int, shift_dual: int):
    """(depth in Lambda, depth in the dual) for O_E-coordinate pieces.

    With first_odd the x variable carries the pi-coefficient (2v+1),
    otherwise the y variable does.
    """
    tx, ty = ((0, 2, 1), (1, 2, 0)) if first_odd else ((0, 2, 0), (1, 2, 1))
    lam = ((tx[0], tx[1], tx[2] + shift_lattice), (ty[0], ty[1], ty[2] + shift_lattice))
    dual = ((tx[0], tx[1], tx[2] + shift_dual), (ty[0], ty[1], ty[2] + shift_dual))
    return (lam, dual)


def hermitian_hyperbolic_pieces(p: int, dual: bool) -> list[BinaryForm]:
    """H(pi) (or pi^{-1} H(pi)) split into two O_F-binary pieces.

    x = alpha e + beta f, alpha = a1 + a2 pi, beta = b1 + b2 pi, <e, f> = pi:
    q(x) = 2p (a2 b1 - a1 b2).  On pi^{-1} H(pi) the form is -2 (a2 b1 - a1 b2).
    """
    if dual:
        return [BinaryForm(0, -2, 0, _pi_depth_coords(True, -1, 0), "dual-hyp-1"),
                BinaryForm(0, 2, 0, _pi_depth_coords(False, -1, 0), "dual-hyp-2")]
    return [BinaryForm(0, 2 * p, 0, _pi_depth_coords(True, 0, 1), "hyp-1"),
            BinaryForm(0, -2 * p, 0, _pi_depth_coords(False, 0, 1), "hyp-2")]


def rank_one(p: int, c: int) -> BinaryForm:
    """<c> on O_E = O_F + O_F pi: q = c (a1^2 - p a2^2)."""
    d = ((0, 2, 0), (1, 2, 1))
    return BinaryForm(c, 0, -c * p, (d, d), f"rank1({c})")


# ---------------------------------------------------------------------------
# lattice models
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class HermitianLatticeModel:
    """Finite model of a rank-(n+1) Hermitian lattice as binary O_F-components."""

    place: LocalPlaceData
    n: int
    kind: str
    M: int
    components: tuple[BinaryForm, ...] = field(default=())
    label_width: int = 1
    unit: int = 1   # the discriminant unit u of the ramified almost-modular lattice

    @property
    def dim_F(self) -> int:
        return 2 * len(self.components)

    @property
    def p(self) -> int:
        return self.place.p

    def volume(self) -> Surd:
        """|det Gram|_p^{1/2} |d|^{dim/2} from the component Gram matrices."""
        p = self.p
        det_val = 0
        for f in self.components:
            g = f.gram()
            det = int(g[0, 0] * g[1, 1] - g[0, 1] * g[1, 0])
            det_val += valuation(abs(det), p)
        twice = -det_val - self.place.e * self.dim_F
        return Surd.power(p, twice)

    def count(self, a: int, k: int) -> int:
        """#{x in Lambda/p^k Lambda : q(x) = a mod p^k}."""
        ring = residue_ring(self.p, k)
        h = None
        for f in self.components:
            c = list(component_counts(self.p, k, f))
            h = c if h is None else convolve_classes(ring, h, c)
        return h[ring.class_of(a)]

    def labels(self, a: int, k: int) -> set[tuple]:
        """Label tuples (elementwise min of component labels) of x with q(x) = a mod p^k."""
        ring = residue_ring(self.p, k)
        acc = None
        for f in self.components:
            pres = component_presence(self.p, k, f)
            pres = {(c, _pad(lab, self.label_width)) for c, lab in pres}
            acc = pres if acc is None else combine_presence(ring, acc, pres)
        C = ring.class_of(a)
        return {lab for c, lab in acc if c == C}

    def label_of_vector(self, x: Sequence[int]) -> tuple:
        if len(x) != self.dim_F:
            raise LatticeError(f"vector needs {self.dim_F} coordinates")
        lab = [INF] * self.label_width
        size = self.p ** self.M
        for i, f in enumerate(self.components):
            vx = valuation(int(x[2 * i]) % size, self.p, self.M)
            vy = valuation(int(x[2 * i + 1]) % size, self.p, self.M)
            vals = _coordinate_values(f, np.array([vx]), np.array([vy]))
            for j, v in enumerate(_pad(tuple(int(a[0]) for a in vals), self.label_width)):
                lab[j] = min(lab[j], v)
        return tuple(lab)

    def q(self, x: Sequence[int]) -> int:
        return sum(f.value(int(x[2 * i]), int(x[2 * i + 1])) for i, f in enumerate(self.components))


def _pad(lab: tuple, width: int) -> tuple:
    return tuple(lab) + (INF,) * (width - len(lab))


def lattice_model(place: LocalPlaceData, n: int, kind: str, M: int = 4,
                  unit: int = 1, enforce_parity: bool = True) -> HermitianLatticeModel:
    """Build the coordinate model for a lattice of the given kind."""
    if kind not in LATTICE_KINDS:
        raise LatticeError(f"unknown lattice kind {kind!r}")
    if n < 0:
        raise LatticeError("n must be non-negative")
    p = place.p
    if place.N != p:
        raise LatticeError("finite models need a prime residue field (N = p)")
    if place.splitting == SPLIT:
        if kind != SELF_DUAL:
            raise LatticeError("only self-dual lattices at split places")
        comps = tuple(hyperbolic_pair() for _ in range(n + 1))
        return HermitianLatticeModel(place, n, kind, M, comps, 2)
    if place.splitting == INERT:
        if kind != SELF_DUAL:
            raise LatticeError("only self-dual lattices at inert places")
        return HermitianLatticeModel(place, n, kind, M, tuple(norm_form(p) for _ in range(n + 1)), 1)
    if p == 2:
        raise LatticeError("ramified models need odd residue characteristic")
    odd = n % 2 == 1
    if enforce_parity and kind in (PI_MODULAR, DUAL_PI_MODULAR) and not odd:
        raise LatticeError("pi-modular lattices need odd n")
    if enforce_parity and kind in (ALMOST_PI_MODULAR, DUAL_ALMOST_PI_MODULAR) and odd:
        raise LatticeError("almost pi-modular lattices need even n")
    if kind == SELF_DUAL:
        last = (-1) ** ((n + 1) // 2) if odd else (-1) ** (n // 2) * unit
        comps = tuple(rank_one(p, 1) for _ in range(n)) + (rank_one(p, last),)
        return HermitianLatticeModel(place, n, kind, M, comps, 2, unit)
    dual = kind in (DUAL_PI_MODULAR, DUAL_ALMOST_PI_MODULAR)
    pieces = []
    for _ in range((n + 1) // 2 if odd else n // 2):
        pieces += hermitian_hyperbolic_pieces(p, dual)
    if not odd:
        pieces.append(rank_one(p, unit))
    return HermitianLatticeModel(place, n, kind, M, tuple(pieces), 2, unit)


def lattice_volume(model: HermitianLatticeModel) -> Surd:
    """Closed-form volume for the self-dual measure."""
    place, n = model.place, model.n
    N = place.N
    if place.splitting != RAMIFIED:
        return Surd.power(N, -2 * place.e * (n + 1))
    if model.kind == SELF_DUAL:
        return Surd.power(N, -(n + 1))
    if model.kind == PI_MODULAR:
        return Surd.power(N, -2 * (n + 1))
    if model.kind == ALMOST_PI_MODULAR:
        return Surd.power(N, -(2 * n + 1))
    if model.kind == DUAL_PI_MODULAR:
        return Surd(1)
    return Surd.power(N, -1)


# ---------------------------------------------------------------------------
# vector types and orbit counts
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class VectorTypeLabel:
    splitting: str
    value: tuple | int
    variant: str = ""

    def __post_init__(self):
        if self.splitting == SPLIT and not (isinstance(self.value, tuple) and len(self.value) == 2):
            raise LatticeError("split types are pairs (s, t)")

    def __str__(self):
        return f"{self.value}{self.variant}"


def norm_class_representative(place: LocalPlaceData, n: int, r: int, norm_class: str,
                              unit: int = 1) -> int:
    """An element a with v(a) = r in the requested class (r >= 0)."""
    p = place.p
    if place.splitting != RAMIFIED or n % 2 == 1 or norm_class == NOT_APPLICABLE:
        return p ** r
    base = (-p) ** r * unit
    return base if norm_class == IN_CLASS else base * least_nonsquare(p)


def norm_class_of(place: LocalPlaceData, n: int, a: int, unit: int = 1) -> str:
    """In-class when (-1)^{v(a)} unit(a) / u is a square mod p (ramified, n even)."""
    if place.splitting != RAMIFIED or n % 2 == 1:
        return NOT_APPLICABLE
    p = place.p
    v = valuation(a, p)
    w = (-1) ** v * (a // p ** v) * pow(unit, -1, p) % p
    return IN_CLASS if pow(w, (p - 1) // 2, p) == 1 else OUT_OF_CLASS


def classify_label(model: HermitianLatticeModel, lab: tuple, r: int,
                   norm_class: str = IN_CLASS) -> VectorTypeLabel:
    place = model.place
    if place.splitting == SPLIT:
        return VectorTypeLabel(SPLIT, (lab[0], lab[1]))
    if place.splitting == INERT:
        return VectorTypeLabel(INERT, r - 2 * lab[0])
    d_lat, d_dual = lab
    if model.kind == PI_MODULAR:
        return VectorTypeLabel(RAMIFIED, r - 1 - d_lat)
    if model.kind == DUAL_PI_MODULAR:
        return VectorTypeLabel(RAMIFIED, r - d_dual)
    if model.kind == ALMOST_PI_MODULAR:
        return VectorTypeLabel(RAMIFIED, r - d_lat)
    if model.kind == DUAL_ALMOST_PI_MODULAR:
        s = r - d_dual
        if s == 0 and norm_class == IN_CLASS:
            return VectorTypeLabel(RAMIFIED, 0, "a" if d_lat >= r else "b")
        return VectorTypeLabel(RAMIFIED, s)
    return VectorTypeLabel(RAMIFIED, r - d_lat)


def vector_type(model: HermitianLatticeModel, x: Sequence[int]) -> VectorTypeLabel:
    """Type of a lattice vector given by its F-coordinates mod p^M."""
    qx = model.q(x) % model.p ** model.M
    r = valuation(qx, model.p, model.M)
    if r >= model.M - 1:
        raise TruncationError("v(q(x)) is not resolved below the truncation level")
    lab = model.label_of_vector(x)
    cls = norm_class_of(model.place, model.n, qx, model.unit)
    cap = 2 * model.M if model.place.splitting == RAMIFIED else model.M
    if max(lab) >= cap - 1 and model.place.splitting == SPLIT and min(lab) >= model.M:
        raise TruncationError("coordinate valuations saturate the truncation level")
    return classify_label(model, lab, r, cls)


def orbit_count_closed(place: LocalPlaceData, n: int, r: int,
                       norm_class: str = NOT_APPLICABLE, dual: bool = False) -> int:
    if r < 0:
        raise LatticeError("r must be non-negative")
    if place.splitting == SPLIT:
        return (r + 1) * (r + 2) // 2
    if place.splitting == INERT:
        return 1 + r // 2
    if n % 2 == 1:
        if norm_class not in (NOT_APPLICABLE,):
            raise LatticeError("norm class only applies for even n")
        return r + 1 if dual else r
    if norm_class not in (IN_CLASS, OUT_OF_CLASS):
        raise LatticeError("even n at a ramified place needs a norm class")
    extra = 1 if norm_class == IN_CLASS else 0
    return r + 1 + extra if dual else r + extra


def _orbit_kind(place: LocalPlaceData, n: int, dual: bool) -> str:
    if place.splitting != RAMIFIED:
        return SELF_DUAL
    if n % 2 == 1:
        return DUAL_PI_MODULAR if dual else PI_MODULAR
    return DUAL_ALMOST_PI_MODULAR if dual else ALMOST_PI_MODULAR


def orbit_count_bruteforce(model: HermitianLatticeModel, r: int, a: int | None = None,
                           max_raise: int = 4) -> int:
    """Number of distinct type labels among x with q(x) = a modulo p^M."""
    if model.M < r + 2:
        raise TruncationError("truncation level must be at least r + 2")
    if a is None:
        a = model.p ** r
    if valuation(a, model.p) != r:
        raise LatticeError("representative does not have valuation r")
    return len(orbit_types_bruteforce(model, r, a))


def orbit_types_bruteforce(model: HermitianLatticeModel, r: int, a: int) -> set[VectorTypeLabel]:
    cls = norm_class_of(model.place, model.n, a, model.unit)
    return {classify_label(model, lab, r, cls) for lab in model.labels(a, model.M)}


def orbit_model(place: LocalPlaceData, n: int, dual: bool, r: int, M: int | None = None,
                unit: int = 1) -> HermitianLatticeModel:
    return lattice_model(place, n, _orbit_kind(place, n, dual), M or r + 2, unit)


# ---------------------------------------------------------------------------
# volume ratios, local discrepancies and the f / B series
# ---------------------------------------------------------------------------

def _N(place: LocalPlaceData) -> Fraction:
    return Fraction(place.N)


def _abs_d_power(place: LocalPlaceData, twice_exponent: int) -> Surd:
    """|d_v|^{twice_exponent/2}."""
    return Surd.power(place.N, -place.e * twice_exponent)


def volume_ratio(place: LocalPlaceData, n: int, vtype: VectorTypeLabel, r: int,
                 norm_class: str = NOT_APPLICABLE) -> Surd:
    """vol(U_v)/vol(U_{y,v}) for a vector y of the given type."""
    N = _N(place)
    if place.splitting == SPLIT:
        s, t = vtype.value
        j = r - s - t
        if j < 0:
            raise LatticeError("split type needs s + t <= r")
        base = _abs_d_power(place, 2 * n + 1) * (1 - N ** -(n + 1))
        if j == 0:
            return base
        return base * N ** ((j - 1) * (n - 1)) * (N ** n - 1) / (N - 1)
    if place.splitting == INERT:
        s = vtype.value
        if s < 0 or s > r or (r - s) % 2:
            raise LatticeError("inert type needs 0 <= s <= r with s = r mod 2")
        base = _abs_d_power(place, 2 * n + 1) * (1 + (-1) ** n * N ** -(n + 1))
        if s == 0:
            return base
        return base * (N ** n - (-1) ** n) / (N + 1) * N ** ((n - 1) * (s - 1))
    s = vtype.value
    if n % 2 == 1:
        if s < 0 or s > r:
            raise LatticeError("ramified type out of range")
        return Surd((1 - N ** -(n + 1)) * N ** ((n - 1) * s))
    root = Surd.power(place.N, -1)
    if vtype.variant == "a":
        return root
    if s == 0:
        return root * (1 - N ** -n)
    if s < 0 or s > r:
        raise LatticeError("ramified type out of range")
    return root * (N ** ((n - 1) * s) - N ** ((n - 1) * (s - 1) - 1))


def ramified_even_constant(N: int, n: int, r_values: Iterable[int] = range(1, 6)) -> Fraction:
    """Solve for c_n: the in- and out-of-class B-series must cancel for every r.

    B_in + B_out is affine in c_n; each r gives one linear equation.  All of
    them must yield the same root.
    """
    roots = set()
    for r in r_values:
        f0 = _b_pair_sum(N, n, r, Fraction(0))
        f1 = _b_pair_sum(N, n, r, Fraction(1))
        slope = f1 - f0
        if slope == 0:
            continue
        roots.add(-f0 / slope)
    if len(roots) != 1:
        raise LatticeError(f"no r-independent constant: {roots}")
    return roots.pop()


def _b_pair_sum(N: int, n: int, r: int, c: Fraction) -> Fraction:
    """(f - 2S)(in) + (f - 2S)(out) at a ramified even place, in units of N^{-1/2} log N."""
    place = LocalPlaceData(N, RAMIFIED)
    total = Fraction(0)
    for cls in (IN_CLASS, OUT_OF_CLASS):
        f = f_series_by_types(place, n, r, cls, dual=True, c_n=c)
        two_s = _two_s_dual_even(place, n, r, cls)
        diff = f - two_s
        k, coeff = diff.coefficient(place.p).single_root()
        total += coeff
    return total


def _two_s_dual_even(place: LocalPlaceData, n: int, r: int, cls: str) -> SymbolicValue:
    N = _N(place)
    sign = -1 if cls == IN_CLASS else 1
    root = Surd.power(place.N, -1)
    return SymbolicValue.log_of(place.N) * (root * (sign * (r + 2) * N ** (-(r + 1) * n) + r))


def c_n_constant(N: int, n: int) -> Fraction:
    """The ramified even-rank constant, -2 N^{-n}, solved from the pairing condition."""
    return ramified_even_constant(N, n)


def d0_local(place: LocalPlaceData, vtype: VectorTypeLabel, r: int,
             kappa: Fraction | None = None, norm_class: str = NOT_APPLICABLE) -> SymbolicValue:
    """Degree-normalised local discrepancy deg(X) * D0(y) of a vector of the given type.

    kappa enters only for dual lattices at ramified places with n even: the
    exceptional in-class coset gets kappa, out-of-class types get s - kappa.
    """
    N = _N(place)
    logN = SymbolicValue.log_of(place.N)
    if place.splitting == SPLIT:
        s, t = vtype.value
        j = r - s - t
        if j < 0:
            raise LatticeError("split type needs s + t <= r")
        return logN * (j * (N ** j - N ** (j - 1)))
    if place.splitting == INERT:
        s = vtype.value
        if s == 0:
            return SymbolicValue()
        return logN * (s * (N ** s + N ** (s - 1)))
    s = vtype.value
    if kappa is None or (norm_class == IN_CLASS and not vtype.variant):
        return logN * (s * N ** s)
    if vtype.variant == "a":
        return SymbolicValue()
    if vtype.variant == "b":
        return logN * kappa
    return logN * ((s - kappa) * N ** s)


def orbit_types_closed(place: LocalPlaceData, n: int, r: int, norm_class: str = NOT_APPLICABLE,
                       dual: bool = True) -> list[VectorTypeLabel]:
    """Types of norm-a vectors predicted by the orbit classification."""
    if place.splitting == SPLIT:
        return [VectorTypeLabel(SPLIT, (s, t)) for s in range(r + 1) for t in range(r + 1 - s)]
    if place.splitting == INERT:
        return [VectorTypeLabel(INERT, s) for s in range(r % 2, r + 1, 2)]
    if n % 2 == 1:
        top = r if dual else r - 1
        return [VectorTypeLabel(RAMIFIED, s) for s in range(top + 1)]
    if dual:
        if norm_class == IN_CLASS:
            return ([VectorTypeLabel(RAMIFIED, 0, "a"), VectorTypeLabel(RAMIFIED, 0, "b")]
                    + [VectorTypeLabel(RAMIFIED, s) for s in range(1, r + 1)])
        return [VectorTypeLabel(RAMIFIED, s) for s in range(r + 1)]
    lo = 0 if norm_class == IN_CLASS else 1
    return [VectorTypeLabel(RAMIFIED, s) for s in range(lo, r + 1)]


def f_series_by_types(place: LocalPlaceData, n: int, r: int, norm_class: str = NOT_APPLICABLE,
                      dual: bool = True, c_n: Fraction | None = None) -> SymbolicValue:
    """|a|^n * sum over types of volume_ratio * d0_local."""
    N = _N(place)
    weight = N ** (-r * n)
    if place.splitting == RAMIFIED and n % 2 == 0:
        if not dual:
            raise LatticeError("the even standard-lattice series is defined through the dual one")
        c = Fraction(-2) * N ** -n if c_n is None else c_n
        kappa = c / (1 - N ** -n)
        total = SymbolicValue()
        for vt in orbit_types_closed(place, n, r, norm_class, True):
            if vt.variant == "a":
                continue
            if vt.variant == "b":
                ratio = Surd.power(place.N, -1) * (1 - N ** -n)
                total = total + d0_local(place, vt, r, kappa, norm_class) * ratio
                continue
            total = total + d0_local(place, vt, r, kappa, norm_class) * volume_ratio(place, n, vt, r, norm_class)
        return total * weight
    if place.splitting == RAMIFIED and not dual:
        return f_series_by_types(place, n, r, dual=True) - \
            SymbolicValue.log_of(place.N) * (r * (1 - N ** -(n + 1)))
    terms = [d0_local(place, vt, r) * volume_ratio(place, n, vt, r)
             for vt in orbit_types_closed(place, n, r, norm_class, True)]
    return sum_values(terms) * weight


def f_series_closed(place: LocalPlaceData, n: int, r: int, norm_class: str = NOT_APPLICABLE,
                    dual: bool = True) -> SymbolicValue:
    """Closed forms of f_{Phi_v, a}(1)."""
    N = _N(place)
    logN = SymbolicValue.log_of(place.N)
    if place.splitting == SPLIT:
        pref = _abs_d_power(place, 2 * n + 1) * (1 - N ** -(n + 1)) / (1 - N ** -n) ** 2
        return logN * pref * (r * (1 - N ** (-(r + 2) * n)) - (r + 2) * (N ** -n - N ** (-(r + 1) * n)))
    if place.splitting == INERT:
        raise LatticeError("inert places have no separate closed form; use the type assembly")
    if n % 2 == 1:
        fd = logN * ((1 - N ** -(n + 1)) * sum((s * N ** (n * (s - r)) for s in range(r + 1)),
                                               Fraction(0)))
        if dual:
            return fd
        return fd - logN * (r * (1 - N ** -(n + 1)))
    root = Surd.power(place.N, -1)
    c = Fraction(-2) * N ** -n
    tail = sum((N ** (-n * i) for i in range(1, r + 1)), Fraction(0))
    if norm_class == IN_CLASS:
        val = r + N ** (-n * r) * c - tail
    else:
        val = r - c * sum((N ** (-n * i) for i in range(r + 1)), Fraction(0)) - tail
    f_dual = logN * (root * val)
    if dual:
        return f_dual
    from .whittaker_local import s_term_closed
    return s_term_closed(place, n, r, norm_class, "standard") * 2 + b_series(place, n, r, norm_class)


def f_series(place: LocalPlaceData, n: int, r: int, norm_class: str = NOT_APPLICABLE,
             dual: bool = True) -> SymbolicValue:
    """f_{Phi_v, a}(1) assembled from orbit types, volume ratios and local discrepancies.

    For the standard lattice at a ramified place with n even there is no type
    assembly; the value is defined as 2 S + B of the dual lattice.
    """
    if place.splitting == RAMIFIED and n % 2 == 0 and not dual:
        return f_series_closed(place, n, r, norm_class, dual)
    return f_series_by_types(place, n, r, norm_class, dual)


def b_series(place: LocalPlaceData, n: int, r: int, norm_class: str = NOT_APPLICABLE,
             dual: bool = True) -> SymbolicValue:
    """Closed-form B_{a,v}(1) at a nonsplit place."""
    N = _N(place)
    logN = SymbolicValue.log_of(place.N)
    if place.splitting == SPLIT:
        raise LatticeError("B vanishes identically at split places")
    if place.splitting == INERT:
        pref = _abs_d_power(place, 2 * n + 1) * (1 + (-1) ** n * N ** -(n + 1)) * 2
        total = sum(((-1) ** ((n + 1) * i) * ((i + 1) // 2) * N ** (-n * i) for i in range(1, r + 1)),
                    Fraction(0))
        return logN * (pref * total)
    if n % 2 == 1:
        b = logN * ((1 - N ** -(n + 1)) * sum((i * N ** (-n * i) for i in range(1, r + 1)), Fraction(0)))
        return b if dual else b - logN * (2 * N ** -(n + 1))
    root = Surd.power(place.N, -1)
    tail = sum((N ** (-n * i) for i in range(1, r + 1)), Fraction(0))
    b_in = logN * (root * (-tail + r * N ** (-(r + 1) * n)))
    return b_in if norm_class == IN_CLASS else -b_in


def degree_decomposition_check(splitting: str, N: int, r: int) -> bool:
    """Type-weighted local degrees sum to sum_{i<=r} N^i."""
    target = sum(N ** i for i in range(r + 1))
    if splitting == SPLIT:
        total = 0
        for s in range(r + 1):
            for t in range(r + 1 - s):
                j = r - s - t
                total += N ** j - N ** (j - 1) if j else 1
        return total == target
    if splitting == INERT:
        total = 0
        for i in range(r // 2 + 1):
            top = r - 2 * i
            total += 1 if top == 0 else N ** top + N ** (top - 1)
        return total == target
    if splitting == RAMIFIED:
        return sum(N ** s for s in range(r + 1)) == target
    raise LatticeError(f"unknown splitting {splitting!r}")
