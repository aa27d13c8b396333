"""Invariant suites shared by the CLI ``verify`` command and the test-suite."""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

import mpmath

from . import archimedean as arch
from . import heights as H
from .lattice import (IN_CLASS, NOT_APPLICABLE, OUT_OF_CLASS, b_series, c_n_constant,
                      degree_decomposition_check, f_series, norm_class_representative,
                      orbit_count_closed, orbit_model, orbit_types_bruteforce, orbit_types_closed)
from .numberfield import INERT, RAMIFIED, SPLIT, FieldData, LocalPlaceData
from .symbolic_values import SymbolicValue, rf_eval_at
from .whittaker_local import (DUAL, SELF_DUAL_KIND, STANDARD, WhittakerSpec, S_term,
                              multiplicity_m, rank_one_k_value, s_term_closed,
                              whittaker_bruteforce_function, whittaker_closed_form,
                              whittaker_induction)

SUITES = ("whittaker", "orbits", "identities", "heights", "archimedean")
THREADS_ENV = "SHIMURA_HEIGHT_THREADS"


@dataclass(frozen=True)
class CaseResult:
    suite: str
    name: str
    ok: bool
    detail: str = ""


@dataclass(frozen=True)
class Sweep:
    N: tuple[int, ...]
    n: tuple[int, ...]
    r: tuple[int, ...]


SWEEPS = {
    "small": Sweep((2, 3, 5), (1, 2, 3), (0, 1, 2, 3)),
    "tiny": Sweep((2, 3), (1, 2), (0, 1, 2)),
}


def thread_cap() -> int:
    raw = os.environ.get(THREADS_ENV)
    if raw:
        try:
            return max(1, int(raw))
        except ValueError:
            pass
    return max(1, min(8, os.cpu_count() or 1))


# ---------------------------------------------------------------------------
# case enumeration
# ---------------------------------------------------------------------------

def whittaker_specs(N: int, n: int, r: int) -> list[WhittakerSpec]:
    specs = []
    for e in (0, 1):
        specs.append(WhittakerSpec(LocalPlaceData(N, SPLIT, e), n, r))
        specs.append(WhittakerSpec(LocalPlaceData(N, INERT, e), n, r))
    if N % 2:
        classes = (IN_CLASS, OUT_OF_CLASS) if n % 2 == 0 else (NOT_APPLICABLE,)
        for kind in (STANDARD, DUAL, SELF_DUAL_KIND):
            for c in classes:
                specs.append(WhittakerSpec(LocalPlaceData(N, RAMIFIED), n, r, kind, c))
    return specs


def _spec_name(spec: WhittakerSpec) -> str:
    pl = spec.place
    tag = "" if spec.norm_class.tag == NOT_APPLICABLE else f",{spec.norm_class.tag}"
    return f"{pl.splitting}(N={pl.N},e={pl.e}),n={spec.n},r={spec.r},{spec.kind}{tag}"


def whittaker_oracle_case(spec: WhittakerSpec) -> CaseResult:
    cf = whittaker_closed_form(spec)
    bf = whittaker_bruteforce_function(spec)
    bad = [s for s in (0, 1, 2) if rf_eval_at(cf, s) != rf_eval_at(bf, s)]
    return CaseResult("whittaker", "oracle " + _spec_name(spec), not bad,
                      f"mismatch at s={bad}" if bad else "")


def induction_case(spec: WhittakerSpec) -> CaseResult:
    ok = whittaker_induction(spec) == whittaker_closed_form(spec)
    return CaseResult("whittaker", "induction " + _spec_name(spec), ok)


def induction_specs(sweep: Sweep) -> list[WhittakerSpec]:
    out = []
    for N in sweep.N:
        for n in sweep.n:
            for r in sweep.r:
                out.append(WhittakerSpec(LocalPlaceData(N, SPLIT), n, r))
                if N % 2 and n % 2 == 0:
                    for kind in (STANDARD, DUAL, SELF_DUAL_KIND):
                        for c in (IN_CLASS, OUT_OF_CLASS):
                            out.append(WhittakerSpec(LocalPlaceData(N, RAMIFIED), n, r, kind, c))
    return out


def dual_difference_case(N: int, n: int, rs: tuple[int, ...]) -> CaseResult:
    """W(dual) - W(standard) and W(self-dual) - W(standard): constant in s and in r."""
    pl = LocalPlaceData(N, RAMIFIED)
    classes = (IN_CLASS, OUT_OF_CLASS) if n % 2 == 0 else (NOT_APPLICABLE,)
    seen = {}
    ok = True
    for kind in (DUAL, SELF_DUAL_KIND):
        for c in classes:
            for r in rs:
                diff = (whittaker_closed_form(WhittakerSpec(pl, n, r, kind, c))
                        - whittaker_closed_form(WhittakerSpec(pl, n, r, STANDARD, c)))
                if not diff.is_constant() and not diff.is_zero():
                    ok = False
                seen.setdefault(kind, set()).add(diff)
    ok = ok and all(len(v) == 1 for v in seen.values())
    return CaseResult("whittaker", f"dual-difference N={N},n={n}", ok,
                      "; ".join(f"{k}: {next(iter(v))}" for k, v in seen.items() if len(v) == 1))


def pairing_case(N: int, n: int, r: int) -> CaseResult:
    pl = LocalPlaceData(N, RAMIFIED)
    ok = True
    for kind in (STANDARD, DUAL, SELF_DUAL_KIND):
        total = (whittaker_closed_form(WhittakerSpec(pl, n, r, kind, IN_CLASS))
                 + whittaker_closed_form(WhittakerSpec(pl, n, r, kind, OUT_OF_CLASS)))
        ok = ok and total.is_constant()
    return CaseResult("whittaker", f"norm-class pairing N={N},n={n},r={r}", ok)


def vanishing_case(N: int, n: int) -> CaseResult:
    ok = True
    for e in (0, 1):
        for sp in (SPLIT, INERT):
            ok = ok and whittaker_closed_form(WhittakerSpec(LocalPlaceData(N, sp, e), n, -e - 1)).is_zero()
    if N % 2:
        c = IN_CLASS if n % 2 == 0 else NOT_APPLICABLE
        ok = ok and whittaker_closed_form(WhittakerSpec(LocalPlaceData(N, RAMIFIED), n, -1, STANDARD, c)).is_zero()
    return CaseResult("whittaker", f"vanishing boundary N={N},n={n}", ok)


def orbit_case(p: int, n: int, r: int, splitting: str, dual: bool, norm_class: str) -> CaseResult:
    pl = LocalPlaceData(p, splitting)
    model = orbit_model(pl, n, dual, r)
    a = norm_class_representative(pl, n, r, norm_class)
    types = orbit_types_bruteforce(model, r, a)
    closed = orbit_count_closed(pl, n, r, norm_class, dual)
    ok = len(types) == closed and types == set(orbit_types_closed(pl, n, r, norm_class, dual))
    name = f"orbits {splitting}(p={p}),n={n},r={r},{'dual' if dual else 'standard'},{norm_class}"
    return CaseResult("orbits", name, ok, f"brute {len(types)} closed {closed}")


def orbit_cases(sweep: Sweep) -> list[tuple]:
    out = []
    for p in sweep.N:
        for n in sweep.n:
            for r in sweep.r:
                out.append((p, n, r, SPLIT, False, NOT_APPLICABLE))
                out.append((p, n, r, INERT, False, NOT_APPLICABLE))
                if p % 2:
                    classes = (IN_CLASS, OUT_OF_CLASS) if n % 2 == 0 else (NOT_APPLICABLE,)
                    for dual in (False, True):
                        for c in classes:
                            out.append((p, n, r, RAMIFIED, dual, c))
    return out


def siegel_weil_case(N: int, n: int, r: int) -> CaseResult:
    """f = 2S (split) and f - 2S = B (inert, ramified); displayed S = derivative S at e = 0."""
    problems = []
    pl = LocalPlaceData(N, SPLIT)
    S = s_term_closed(pl, n, r)
    if f_series(pl, n, r) != S * 2:
        problems.append("split f != 2S")
    if S != S_term(WhittakerSpec(pl, n, r)):
        problems.append("split S display")
    pl = LocalPlaceData(N, INERT)
    S = s_term_closed(pl, n, r)
    if f_series(pl, n, r) - S * 2 != b_series(pl, n, r):
        problems.append("inert f - 2S != B")
    if S != S_term(WhittakerSpec(pl, n, r)):
        problems.append("inert S display")
    if N % 2:
        pl = LocalPlaceData(N, RAMIFIED)
        if n % 2:
            for dual, kind in ((True, DUAL), (False, STANDARD)):
                S = s_term_closed(pl, n, r, schwartz=kind)
                if f_series(pl, n, r, dual=dual) - S * 2 != b_series(pl, n, r, dual=dual):
                    problems.append(f"ramified odd {kind} f - 2S != B")
                if S != S_term(WhittakerSpec(pl, n, r, kind)):
                    problems.append(f"ramified odd {kind} S display")
        else:
            Bs = []
            for c in (IN_CLASS, OUT_OF_CLASS):
                for dual, kind in ((True, DUAL), (False, STANDARD)):
                    S = s_term_closed(pl, n, r, c, kind)
                    if f_series(pl, n, r, c, dual) - S * 2 != b_series(pl, n, r, c):
                        problems.append(f"ramified even {kind} {c} f - 2S != B")
                    if S != S_term(WhittakerSpec(pl, n, r, kind, c)):
                        problems.append(f"ramified even {kind} {c} S display")
                Bs.append(b_series(pl, n, r, c))
            if not (Bs[0] + Bs[1]).is_zero():
                problems.append("B pairing")
            if c_n_constant(N, n) != Fraction(-2, N ** n):
                problems.append("c_n")
    return CaseResult("identities", f"siegel-weil N={N},n={n},r={r}", not problems, "; ".join(problems))


def degree_case(N: int) -> CaseResult:
    ok = all(degree_decomposition_check(sp, N, r) for sp in (SPLIT, INERT, RAMIFIED) for r in range(11))
    return CaseResult("identities", f"degree decompositions N={N}", ok)


def multiplicity_case(N: int, r: int) -> CaseResult:
    pl = LocalPlaceData(N, INERT)
    lhs = rank_one_k_value(pl, r) * 2
    rhs = SymbolicValue.log_of(N) * multiplicity_m(pl, r, True, True)
    return CaseResult("identities", f"multiplicity N={N},v={r}", lhs == rhs, f"2k={lhs}")


def heights_cases(prime_bound: int) -> list[CaseResult]:
    out = []
    fields = {"Q(sqrt5),E=F(sqrt-1)": FieldData.real_quadratic(5, -1),
              "Q(sqrt2),E=F(sqrt-3)": FieldData.real_quadratic(2, -3),
              "Q,E=Q(i)": FieldData.rational(-1)}
    for name, fd in fields.items():
        base = (H.modular_height_expression(fd, 1) - H.curve_height_expression(fd)).is_zero()
        out.append(CaseResult("heights", f"base case {name}", base))
        steps = all(H.induction_step_check(fd, n)[0] for n in range(2, 11))
        out.append(CaseResult("heights", f"induction steps 2..10 {name}", steps))
        tele = all(H.telescoping_check(fd, n) for n in range(2, 11))
        out.append(CaseResult("heights", f"telescoping {name}", tele))
        for n in (1, 2, 3):
            pre = H.modular_height_expression(fd, n)
            post = H.modular_height_expression(fd, n, H.POST_FE)
            sym = (H.pre_to_post(fd, pre) - post).is_zero()
            out.append(CaseResult("heights", f"pre/post symbolic n={n} {name}", sym))
    fd = fields["Q(sqrt5),E=F(sqrt-1)"]
    for n in (1, 2, 3):
        a = H.modular_height(fd, n, H.PRE_FE, prime_bound)
        b = H.modular_height(fd, n, H.POST_FE, prime_bound)
        diff = abs(a.total - b.total)
        ok = diff <= a.error_bound + b.error_bound and diff <= 1e-8
        out.append(CaseResult("heights", f"pre/post numeric n={n}", ok, f"|diff|={mpmath.nstr(diff, 3)}"))
    return out


def archimedean_cases() -> list[CaseResult]:
    out = []
    worst = max(abs(arch.exp_integral_ei(x) - arch.ei_quadrature(x))
                for x in [-10, -5, -2, -1, -0.5, -0.1])
    out.append(CaseResult("archimedean", "Ei vs quadrature", worst < 1e-9, f"max err {mpmath.nstr(worst, 3)}"))
    q02 = abs(arch.green_kernel_q(0, 1, 2) - mpmath.log(2) / 2)
    out.append(CaseResult("archimedean", "Q_0(2) = log2/2", q02 < 1e-10))
    res = max(abs(arch.green_ode_residual(s, n, t, 1e-4))
              for s in (0, 0.5, 1) for n in (1, 2, 3) for t in (1.5, 2, 5, 20))
    out.append(CaseResult("archimedean", "ODE residual grid", res < 1e-5, f"max {mpmath.nstr(res, 3)}"))
    r1 = arch.green_ode_residual(0.5, 2, 2.5, 1e-3)
    r2 = arch.green_ode_residual(0.5, 2, 2.5, 5e-4)
    out.append(CaseResult("archimedean", "ODE second-order scaling", 3.5 < r1 / r2 < 4.5,
                          f"ratio {mpmath.nstr(r1 / r2, 4)}"))
    krel = max(abs(arch.k_integral(0, n, q) - arch.k_integral_via_q(n, q))
               for n in (1, 2) for q in (-0.5, -1, -5))
    out.append(CaseResult("archimedean", "k-integral vs Q relation", krel < 1e-6))
    c3 = all(arch.projection_constant_check(n)[0] for n in range(1, 51))
    out.append(CaseResult("archimedean", "c3 forms agree n<=50", c3))
    psi = max(abs(arch.digamma(n + 1) - (sum(mpmath.mpf(1) / i for i in range(1, n + 1)) - mpmath.euler))
              for n in range(1, 21))
    out.append(CaseResult("archimedean", "digamma harmonic", psi < 1e-10))
    return out


# ---------------------------------------------------------------------------
# runners
# ---------------------------------------------------------------------------

def _call(args):
    fn, params = args
    return fn(*params)


def _run(jobs: list[tuple], threads: int) -> list[CaseResult]:
    if threads <= 1 or len(jobs) < 4:
        return [_call(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(_call, jobs, chunksize=2))


def run_suite(suite: str, sweep: str = "small", prime_bound: int = 10 ** 6,
              threads: int | None = None) -> list[CaseResult]:
    if suite not in SUITES:
        raise ValueError(f"unknown suite {suite!r}")
    sw = SWEEPS[sweep]
    threads = thread_cap() if threads is None else threads
    if suite == "whittaker":
        jobs = [(whittaker_oracle_case, (spec,)) for N in sw.N for n in sw.n for r in sw.r
                for spec in whittaker_specs(N, n, r)]
        jobs += [(induction_case, (spec,)) for spec in induction_specs(sw)]
        jobs += [(dual_difference_case, (N, n, sw.r)) for N in sw.N if N % 2 for n in sw.n]
        jobs += [(pairing_case, (N, n, r)) for N in sw.N if N % 2 for n in sw.n if n % 2 == 0
                 for r in sw.r]
        jobs += [(vanishing_case, (N, n)) for N in sw.N for n in sw.n]
        return _run(jobs, threads)
    if suite == "orbits":
        return _run([(orbit_case, c) for c in orbit_cases(sw)], threads)
    if suite == "identities":
        jobs = [(siegel_weil_case, (N, n, r)) for N in sw.N for n in sw.n for r in sw.r]
        jobs += [(degree_case, (N,)) for N in (2, 3, 4, 5, 7)]
        jobs += [(multiplicity_case, (N, r)) for N in sw.N for r in (1, 3)]
        return _run(jobs, threads)
    if suite == "heights":
        return heights_cases(prime_bound)
    return archimedean_cases()
