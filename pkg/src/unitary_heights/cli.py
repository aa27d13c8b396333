"""Command-line frontend: ``unitary-heights <subcommand> ...``.

Exit codes: 0 success, 1 verification failure, 2 malformed input.
"""

from __future__ import annotations

import argparse
import re
import sys
from dataclasses import dataclass

import mpmath

from . import archimedean as arch
from . import heights as H
from .lattice import (IN_CLASS, NOT_APPLICABLE, OUT_OF_CLASS, LatticeError, b_series,
                      orbit_count_bruteforce, orbit_count_closed, orbit_model,
                      orbit_types_closed, f_series, norm_class_representative)
from .numberfield import (INERT, RAMIFIED, SPLIT, TABLE_MODE, DivergenceError, FieldData,
                          FieldError, LocalPlaceData, MissingInputError, constant_c)
from .symbolic_values import EULER, LOG_PI, RATIONAL, SymbolicValue, rf_eval_at, sv_to_numeric
from .verification import SUITES, SWEEPS, run_suite, thread_cap
from .whittaker_local import (DUAL, SELF_DUAL_KIND, STANDARD, InvalidSpecError,
                              UnsupportedCaseError, WhittakerSpec, S_term, local_l_ratio,
                              s_term_closed, whittaker_bruteforce_function,
                              whittaker_closed_form, whittaker_deriv_combo,
                              whittaker_derivative)

RECORDS_HEADER = "# unitary-heights records v1"
EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

LATTICES = {"standard": STANDARD, "std": STANDARD, "dual": DUAL, "self-dual": SELF_DUAL_KIND}
CLASSES = {"in": IN_CLASS, "out": OUT_OF_CLASS, "none": NOT_APPLICABLE}
SPLITTING_NAMES = {"split": SPLIT, "inert": INERT, "ramified": RAMIFIED}


class UsageError(ValueError):
    pass


class ConfigError(UsageError):
    def __init__(self, path, line: int, column: int, message: str):
        super().__init__(f"{path}:{line}:{column}: {message}")
        self.line, self.column = line, column


# ---------------------------------------------------------------------------
# field configuration
# ---------------------------------------------------------------------------

GLOBAL_KEYS = {"degree", "disc_F", "disc_rel_norm", "mode"}
PLACE_KEYS = {"p", "Nv", "splitting", "e"}
_LINE = re.compile(r"^(\s*)([A-Za-z_][A-Za-z0-9_]*)\s*=\s*(.*?)\s*$")


def _int_value(path, lineno, col, key, raw):
    try:
        return int(raw)
    except ValueError:
        raise ConfigError(path, lineno, col, f"{key} expects an integer, got {raw!r}") from None


def load_field_config(path) -> FieldData:
    """Parse a place-table config.

    Grammar: ``key = value`` lines, ``[place]`` headers opening a new place block,
    ``#`` comments to end of line.  Global keys: degree, disc_F, disc_rel_norm,
    mode (only ``table``).  Place keys: p, Nv (defaults to p), splitting, e
    (defaults to 0).
    """
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise UsageError(f"{path}: {exc.strerror}") from None
    glob: dict[str, tuple] = {}
    places: list[dict[str, tuple]] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        if line.strip() == "[place]":
            places.append({"__line__": (lineno, line.index("[") + 1)})
            continue
        if line.strip().startswith("["):
            raise ConfigError(path, lineno, line.index("[") + 1,
                              f"unknown section {line.strip()!r}")
        m = _LINE.match(line)
        if not m:
            raise ConfigError(path, lineno, len(line) - len(line.lstrip()) + 1,
                              "expected 'key = value'")
        key, value = m.group(2), m.group(3)
        col = len(m.group(1)) + 1
        vcol = m.start(3) + 1
        block, allowed = (places[-1], PLACE_KEYS) if places else (glob, GLOBAL_KEYS)
        if key not in allowed:
            where = "[place]" if places else "global"
            raise ConfigError(path, lineno, col, f"unknown {where} key {key!r}")
        if key in block:
            raise ConfigError(path, lineno, col, f"duplicate key {key!r}")
        if not value:
            raise ConfigError(path, lineno, vcol, f"missing value for {key!r}")
        block[key] = (value, lineno, vcol)

    for key in ("degree", "disc_F", "disc_rel_norm"):
        if key not in glob:
            raise ConfigError(path, 1, 1, f"missing global key {key!r}")
    if "mode" in glob and glob["mode"][0] != TABLE_MODE:
        value, ln, col = glob["mode"]
        raise ConfigError(path, ln, col, f"config files describe table mode, got {value!r}")
    ints = {k: _int_value(path, glob[k][1], glob[k][2], k, glob[k][0])
            for k in ("degree", "disc_F", "disc_rel_norm")}

    table, seen = [], {}
    for block in places:
        ln, col = block["__line__"]
        for key in ("p", "splitting"):
            if key not in block:
                raise ConfigError(path, ln, col, f"[place] block lacks {key!r}")
        p = _int_value(path, block["p"][1], block["p"][2], "p", block["p"][0])
        Nv = (_int_value(path, block["Nv"][1], block["Nv"][2], "Nv", block["Nv"][0])
              if "Nv" in block else p)
        e = _int_value(path, block["e"][1], block["e"][2], "e", block["e"][0]) if "e" in block else 0
        sp_raw, sp_ln, sp_col = block["splitting"]
        if sp_raw not in SPLITTING_NAMES:
            raise ConfigError(path, sp_ln, sp_col, "splitting must be split, inert or ramified")
        if p in seen:
            raise ConfigError(path, block["p"][1], block["p"][2],
                              f"duplicate entry for prime {p} (first at line {seen[p]})")
        seen[p] = block["p"][1]
        try:
            table.append(LocalPlaceData(Nv, SPLITTING_NAMES[sp_raw], e, p))
        except FieldError as exc:
            raise ConfigError(path, ln, col, str(exc)) from None
    try:
        return FieldData.from_table(ints["degree"], ints["disc_F"], ints["disc_rel_norm"], table)
    except FieldError as exc:
        raise ConfigError(path, 1, 1, str(exc)) from None


_BUILTIN = re.compile(r"^builtin:Q(?:\(sqrt(\d+)\))?$")
_EXT = re.compile(r"^rel:(-\d+)$")


def builtin_field(spec: str, ext: str | None, bound: int) -> FieldData:
    m = _BUILTIN.match(spec)
    if not m:
        raise UsageError(f"unknown field {spec!r} (expected builtin:Q or builtin:Q(sqrtM))")
    if ext is None:
        raise UsageError("built-in fields need --ext rel:<negative integer>")
    e = _EXT.match(ext)
    if not e:
        raise UsageError(f"malformed extension {ext!r} (expected rel:<negative integer>)")
    delta = int(e.group(1))
    if m.group(1) is None:
        return FieldData.rational(delta, bound)
    return FieldData.real_quadratic(int(m.group(1)), delta, bound)


def field_from_args(args) -> FieldData:
    if bool(args.field) == bool(args.config):
        raise UsageError("give exactly one of --field and --config")
    if args.config:
        return load_field_config(args.config)
    return builtin_field(args.field, args.ext, args.prime_bound)


# ---------------------------------------------------------------------------
# output
# ---------------------------------------------------------------------------

@dataclass
class Output:
    records: bool
    precision: int = 12

    def __post_init__(self):
        self.rows: list[tuple[str, str, str, str]] = []

    def show(self, label: str, text) -> None:
        print(f"{label:<44} {text}")

    def record(self, name: str, value, error_bound=0.0, rigorous: bool = True) -> None:
        if isinstance(value, SymbolicValue):
            value = sv_to_numeric(value, self.precision + 5)
        if not isinstance(value, str):
            value = mpmath.nstr(mpmath.mpf(value), self.precision)
        self.rows.append((name, value, f"{float(error_bound):.3e}", "true" if rigorous else "false"))

    def flush(self) -> None:
        if self.records and self.rows:
            print(RECORDS_HEADER)
            for row in self.rows:
                print("\t".join(row))


def _sv_line(v: SymbolicValue, precision: int) -> str:
    return f"{v!r} = {mpmath.nstr(sv_to_numeric(v, precision + 5), precision)}"


def _report(out: Output, rep: H.HeightReport, key: str) -> None:
    print(rep.formula)
    for note in rep.annotations:
        out.show("  note", note)
    out.show("  exact constant", repr(rep.symbolic))
    for sym, coeff in sorted(rep.symbolic.items(), key=lambda kv: str(kv[0])):
        name = {RATIONAL: "rational part", LOG_PI: "log(pi) coefficient",
                EULER: "gamma coefficient"}.get(sym, f"log({sym}) coefficient")
        out.show(f"    {name}", coeff)
    out.show("  exact constant (numeric)", mpmath.nstr(sv_to_numeric(rep.symbolic, out.precision + 5),
                                                      out.precision))
    out.record(f"{key}.constant", rep.symbolic)
    for label, v in rep.l_series:
        out.show(f"  {label}", f"{mpmath.nstr(v.value, out.precision)} (+/- {v.tail_bound:.3e})")
        out.record(f"{key}.{_slug(label)}", v.value, v.tail_bound, v.rigorous)
    out.show("  total", f"{mpmath.nstr(rep.total, out.precision)} (+/- {rep.error_bound:.3e})"
             + ("" if rep.rigorous else " [heuristic tail]"))
    out.record(f"{key}.total", rep.total, rep.error_bound, rep.rigorous)


def _slug(label: str) -> str:
    return re.sub(r"[^A-Za-z0-9]+", "_", label).strip("_")


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_height(args, out: Output) -> int:
    fd = field_from_args(args)
    form = H.POST_FE if args.form == "post" else H.PRE_FE
    rep = H.modular_height(fd, args.dim, form, args.prime_bound, args.precision,
                           args.omit_conductor)
    print("symbolic:", rep.expression)
    _report(out, rep, f"height.n{args.dim}")
    return EXIT_OK


def cmd_cm_height(args, out: Output) -> int:
    fd = field_from_args(args)
    rep = H.cm_point_height(fd, args.prime_bound, args.precision)
    print("symbolic:", rep.expression)
    _report(out, rep, "cm_height")
    return EXIT_OK


def _place_from_args(args) -> LocalPlaceData:
    return LocalPlaceData(args.N, SPLITTING_NAMES[args.splitting], args.e,
                          allow_ramified_different=args.allow_ramified_different)


def _spec_from_args(args) -> WhittakerSpec:
    place = _place_from_args(args)
    cls = CLASSES[args.norm_class]
    if place.splitting == RAMIFIED and args.n % 2 == 0 and cls == NOT_APPLICABLE:
        raise UsageError("ramified places with n even need --class in|out")
    if not (place.splitting == RAMIFIED and args.n % 2 == 0):
        cls = NOT_APPLICABLE
    return WhittakerSpec(place, args.n, args.r, LATTICES[args.lattice], cls)


def cmd_whittaker(args, out: Output) -> int:
    spec = _spec_from_args(args)
    cf = whittaker_closed_form(spec)
    out.show("closed form W(X), X = N^{-s}", cf)
    if args.bruteforce:
        bf = whittaker_bruteforce_function(spec)
        out.show("brute-force lattice sum", bf)
        agree = all(rf_eval_at(bf, s) == rf_eval_at(cf, s) for s in (0, 1, 2))
        out.show("closed form = brute force", agree)
        out.record("whittaker.bruteforce_agrees", "1" if agree else "0")
        if not agree:
            out.flush()
            return EXIT_FAIL
    for s in args.eval:
        v = rf_eval_at(cf, s)
        out.show(f"W at s={s}", v)
        out.record(f"whittaker.value.s{s}", v.to_mpf(out.precision + 10))
    if args.deriv:
        d = whittaker_derivative(spec)
        out.show("W'(0)", _sv_line(d, out.precision))
        out.record("whittaker.derivative", d)
        if not spec.is_zero and not rf_eval_at(cf, 0).is_zero():
            combo = whittaker_deriv_combo(spec)
            out.show("W'(0)/W(0) + L'/L ratio", _sv_line(combo, out.precision))
            out.record("whittaker.deriv_combo", combo)
            out.show("S term", _sv_line(S_term(spec), out.precision))
            out.record("whittaker.S", S_term(spec))
        else:
            out.show("W'(0)/W(0)", "undefined (W(0) = 0)")
        out.show("L'/L ratio term", _sv_line(local_l_ratio(spec), out.precision))
    return EXIT_OK


def cmd_orbits(args, out: Output) -> int:
    place = _place_from_args(args)
    cls = CLASSES[args.norm_class]
    if not (place.splitting == RAMIFIED and args.n % 2 == 0):
        cls = NOT_APPLICABLE
    elif cls == NOT_APPLICABLE:
        raise UsageError("ramified places with n even need --class in|out")
    dual = args.lattice != "standard" and args.lattice != "std"
    count = orbit_count_closed(place, args.n, args.r, cls, dual)
    out.show("orbit count (closed form)", count)
    out.record("orbits.closed", str(count))
    types = orbit_types_closed(place, args.n, args.r, cls, dual)
    out.show("types", " ".join(str(t) for t in types))
    if args.bruteforce:
        model = orbit_model(place, args.n, dual, args.r)
        a = norm_class_representative(place, args.n, args.r, cls)
        brute = orbit_count_bruteforce(model, args.r, a)
        out.show("orbit count (lattice enumeration)", brute)
        out.record("orbits.bruteforce", str(brute))
        if brute != count:
            out.flush()
            return EXIT_FAIL
    return EXIT_OK


def cmd_fseries(args, out: Output) -> int:
    place = _place_from_args(args)
    if place.e:
        raise UsageError("the discrepancy series is implemented for e_v = 0")
    cls = CLASSES[args.norm_class]
    ram_even = place.splitting == RAMIFIED and args.n % 2 == 0
    if not ram_even:
        cls = NOT_APPLICABLE
    elif cls == NOT_APPLICABLE:
        raise UsageError("ramified places with n even need --class in|out")
    dual = args.lattice in ("dual", "self-dual")
    kind = DUAL if dual else STANDARD
    f = f_series(place, args.n, args.r, cls, dual)
    S = s_term_closed(place, args.n, args.r, cls, kind)
    out.show("f_{a,v}(1)", _sv_line(f, out.precision))
    out.show("S_{a,n}", _sv_line(S, out.precision))
    out.record("fseries.f", f)
    out.record("fseries.S", S)
    if place.splitting == SPLIT:
        ok = f == S * 2
        out.show("f = 2S", ok)
    else:
        B = b_series(place, args.n, args.r, cls, dual)
        out.show("B_{a,v}(1)", _sv_line(B, out.precision))
        out.record("fseries.B", B)
        ok = f - S * 2 == B
        out.show("f - 2S = B", ok)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_constants(args, out: Output) -> int:
    n = args.dim
    ok, lhs, rhs = arch.projection_constant_check(n)
    out.show(f"c3 (n={n})", _sv_line(rhs, out.precision))
    out.show("c3 partial-fraction form agrees", ok)
    out.record("c3", rhs)
    out.show("Green difference constant", str(arch.green_difference_constant(n)))
    out.show("log singularity multiple of Q_s", str(arch.LOG_SINGULARITY_MULTIPLE))
    q = arch.green_kernel_q(0, 1, 2)
    out.show("Q_0(2) (n=1)", mpmath.nstr(q, out.precision))
    out.record("Q0_2_n1", q)
    for x in (-1, -10):
        v = arch.exp_integral_ei(x)
        out.show(f"Ei({x})", mpmath.nstr(v, out.precision))
        out.record(f"Ei({x})", v)
    if args.field or args.config:
        fd = field_from_args(args)
        for kind in ("c0", "c1", "c4-partial"):
            e, _ = constant_c(kind, fd, n)
            out.show(kind, e)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_verify(args, out: Output) -> int:
    suites = SUITES if args.suite == "all" else (args.suite,)
    threads = args.threads or thread_cap()
    failures = 0
    for suite in suites:
        results = run_suite(suite, args.sweep, args.prime_bound, threads)
        bad = [r for r in results if not r.ok]
        failures += len(bad)
        for r in results:
            if args.verbose or not r.ok:
                status = "PASS" if r.ok else "FAIL"
                print(f"{status} {suite}: {r.name}" + (f"  [{r.detail}]" if r.detail else ""))
        print(f"{suite}: {len(results) - len(bad)}/{len(results)} passed")
        out.record(f"verify.{suite}.failures", str(len(bad)))
    return EXIT_FAIL if failures else EXIT_OK


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def _positive(text: str) -> int:
    try:
        v = int(float(text))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--records", action="store_true",
                        help="append tab-separated name/value/error_bound/rigorous lines")
    common.add_argument("--precision", type=_positive, default=12, help="significant digits")
    common.add_argument("--prime-bound", type=_positive, default=10 ** 6,
                        help="Euler products run over N_v <= bound")

    fieldopts = argparse.ArgumentParser(add_help=False)
    fieldopts.add_argument("--field", help="builtin:Q or builtin:Q(sqrtM)")
    fieldopts.add_argument("--ext", help="rel:D, E = F(sqrt D) with D < 0")
    fieldopts.add_argument("--config", help="place-table config file")

    local = argparse.ArgumentParser(add_help=False)
    local.add_argument("--splitting", choices=sorted(SPLITTING_NAMES), required=True)
    local.add_argument("--N", type=int, required=True, help="residue field cardinality")
    local.add_argument("--n", type=int, required=True)
    local.add_argument("--r", type=int, required=True, help="v(a)")
    local.add_argument("--e", type=int, default=0, help="different exponent e_v")
    local.add_argument("--lattice", choices=sorted(LATTICES), default="dual")
    local.add_argument("--class", dest="norm_class", choices=sorted(CLASSES), default="none")
    local.add_argument("--allow-ramified-different", action="store_true",
                       help="exploratory: accept e_v > 0 at ramified places")

    p = argparse.ArgumentParser(prog="unitary-heights",
                                description="Heights of unitary Shimura varieties and their local ingredients.")
    sub = p.add_subparsers(dest="command", required=True)

    h = sub.add_parser("height", parents=[common, fieldopts], help="modular height")
    h.add_argument("--dim", type=_positive, required=True, help="n (the variety has dimension n)")
    h.add_argument("--form", choices=("pre", "post"), default="pre")
    h.add_argument("--omit-conductor", action="store_true",
                   help="use the uncorrected reflection constant in the post form")
    h.set_defaults(func=cmd_height)

    c = sub.add_parser("cm-height", parents=[common, fieldopts], help="CM-point height")
    c.set_defaults(func=cmd_cm_height)

    w = sub.add_parser("whittaker", parents=[common, local], help="local Whittaker function")
    w.add_argument("--eval", type=int, action="append", default=[], help="evaluate at integer s")
    w.add_argument("--deriv", action="store_true", help="derivative at s = 0")
    w.add_argument("--bruteforce", action="store_true", help="compare with the lattice oracle")
    w.set_defaults(func=cmd_whittaker)

    o = sub.add_parser("orbits", parents=[common, local], help="orbit counts")
    o.add_argument("--bruteforce", action="store_true")
    o.set_defaults(func=cmd_orbits)

    f = sub.add_parser("fseries", parents=[common, local], help="local discrepancy series")
    f.set_defaults(func=cmd_fseries)

    v = sub.add_parser("verify", parents=[common], help="invariant suites")
    v.add_argument("--suite", choices=SUITES + ("all",), default="all")
    v.add_argument("--sweep", choices=sorted(SWEEPS), default="small")
    v.add_argument("--threads", type=_positive, help="worker processes (default: env or cpu count)")
    v.add_argument("--verbose", action="store_true", help="print passing cases too")
    v.set_defaults(func=cmd_verify)

    k = sub.add_parser("constants", parents=[common, fieldopts], help="named constants")
    k.add_argument("--dim", type=_positive, default=1)
    k.set_defaults(func=cmd_constants)
    return p


def parse_and_dispatch(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    out = Output(args.records, args.precision)
    try:
        code = args.func(args, out)
    except (UsageError, FieldError, InvalidSpecError, UnsupportedCaseError, LatticeError,
            DivergenceError, MissingInputError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    out.flush()
    return code


def main() -> None:
    sys.exit(parse_and_dispatch())


if __name__ == "__main__":
    main()
