"""``slelab`` command line.

Exit codes: 0 ok, 1 usage, 2 numerical domain failure, 3 a requested
identity or check failed.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from fractions import Fraction

import numpy as np

from . import __version__
from .algebra import (
    DomainError,
    PBWVector,
    VermaParams,
    find_singular_vectors,
    format_fraction,
    gram_matrix,
    minimal_model_c,
    minimal_model_weight,
    partitions,
    primitive_singular_vectors,
    submodule_reduce,
)
from .algebra.verma import check_partition
from .bridge import CandidateSpec, obstruction_L1, solve_kappa_null
from .io import hull_to_csv, hull_to_json, trace_to_csv, trace_to_json, write_with_manifest
from .loewner import BranchError, DrivePath, FlowConfig, GridSpec, SwallowedError, hull_grid, trace_sample
from .stochastic import (
    backward_law_experiment,
    sample_brownian,
    scale_invariance_experiment,
    stationarity_experiment,
)

EXIT_OK, EXIT_USAGE, EXIT_NUMERIC, EXIT_CHECK = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """argparse with usage errors mapped onto exit code 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


# flag parsers -------------------------------------------------------------------

_NUM = r"(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?"
_PURE_IMAG = re.compile(rf"([+-]?)({_NUM})?i")
_FULL = re.compile(rf"([+-]?{_NUM})(?:([+-])({_NUM})?i)?")


def parse_complex(text: str) -> complex:
    """``"a+bi"``, ``"bi"`` or ``"a"`` to a complex number."""
    s = text.replace(" ", "")
    m = _PURE_IMAG.fullmatch(s)
    if m:
        return complex(0.0, float(m.group(1) + (m.group(2) or "1")))
    m = _FULL.fullmatch(s)
    if not m:
        raise argparse.ArgumentTypeError(f"malformed complex number {text!r}; expected a+bi")
    imag = float(m.group(2) + (m.group(3) or "1")) if m.group(2) else 0.0
    return complex(float(m.group(1)), imag)


def parse_fraction(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from None


def parse_int_pair(text: str) -> tuple:
    try:
        a, b = (int(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected two integers 'a,b', got {text!r}") from None
    return a, b


def parse_float_list(text: str) -> list:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def parse_grid(text: str) -> GridSpec:
    parts = text.split(",")
    if len(parts) != 6:
        raise argparse.ArgumentTypeError("grid is re_min,re_max,im_min,im_max,nx,ny")
    try:
        lo = [float(x) for x in parts[:4]]
        nx, ny = int(parts[4]), int(parts[5])
    except ValueError:
        raise argparse.ArgumentTypeError(f"malformed grid {text!r}") from None
    if nx < 1 or ny < 1 or lo[0] > lo[1] or lo[2] > lo[3]:
        raise argparse.ArgumentTypeError(f"empty or inverted grid {text!r}")
    return GridSpec(*lo, nx, ny)


def parse_terms(text: str) -> dict:
    """``"4:1;2,2:-5/3"`` -> ``{(4,): 1, (2, 2): -5/3}``."""
    terms = {}
    for chunk in filter(None, (c.strip() for c in text.split(";"))):
        try:
            part, coeff = chunk.split(":")
            key = check_partition(tuple(int(x) for x in part.split(",")))
            terms[key] = terms.get(key, 0) + Fraction(coeff)
        except (ValueError, ZeroDivisionError):
            raise argparse.ArgumentTypeError(f"bad term {chunk!r}; expected 'parts:coeff'") from None
    if not terms:
        raise argparse.ArgumentTypeError("no terms given")
    if len({sum(k) for k in terms}) != 1:
        raise argparse.ArgumentTypeError("all terms must sit at the same level")
    return terms


# helpers ------------------------------------------------------------------------

def _emit(text: str, args, subcommand: str, seed=None):
    out = getattr(args, "out", None)
    if out:
        flags = {k: v for k, v in vars(args).items() if k not in ("func",)}
        write_with_manifest(out, text, subcommand, flags, seed)
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _require_seed(args):
    if args.kappa > 0 and args.seed is None:
        raise UsageError("--seed is required when --kappa > 0")
    if args.kappa < 0:
        raise UsageError("--kappa must be non-negative")


def _check_grid_time(t: float, dt: float, name: str) -> float:
    k = round(t / dt)
    if k < 0 or abs(k * dt - t) > 1e-9 * max(1.0, t):
        raise UsageError(f"{name} = {t} must be a non-negative multiple of --dt = {dt}")
    return k * dt


def _drive(args, T: float, two_sided: bool) -> DrivePath:
    if args.kappa == 0:
        return DrivePath.zero(T, args.dt, two_sided=two_sided)
    return sample_brownian(T, args.dt, args.seed, args.kappa, two_sided=two_sided)


# subcommands --------------------------------------------------------------------

def cmd_trace(args) -> int:
    _require_seed(args)
    T = _check_grid_time(args.T, args.dt, "--T")
    if T == 0:
        raise UsageError("--T must be positive")
    if args.times is None:
        k = round(T / args.dt)
        times = np.unique(np.round(np.linspace(0, k, min(k, 100) + 1)).astype(int)) * args.dt
    else:
        times = np.array([_check_grid_time(t, args.dt, "--times") for t in args.times])
        if np.any(times > T + 1e-12):
            raise UsageError("--times must not exceed --T")
    cfg = FlowConfig(n=args.grade, s=args.sign, dt=args.dt, eps_swallow=args.eps_swallow)
    drive = _drive(args, T, two_sided=args.sign == 2)
    tr = trace_sample(drive, cfg, times)
    text = trace_to_json(tr) if args.format == "json" else trace_to_csv(tr)
    _emit(text, args, "trace", args.seed)
    return EXIT_OK


def cmd_hull(args) -> int:
    _require_seed(args)
    t = _check_grid_time(args.t, args.dt, "--t")
    cfg = FlowConfig(n=args.grade, dt=args.dt, eps_swallow=args.eps_swallow)
    drive = _drive(args, max(t, args.dt), two_sided=False)
    hull = hull_grid(drive, cfg, t, args.grid)
    text = hull_to_json(hull) if args.format == "json" else hull_to_csv(hull)
    _emit(text, args, "hull", args.seed)
    return EXIT_OK


def _params(args) -> VermaParams:
    return VermaParams(args.c, args.delta)


def _fr(cf) -> str:
    return format_fraction(cf.constant_value())


def cmd_singular(args) -> int:
    vecs = find_singular_vectors(args.level, _params(args))
    payload = {
        "level": args.level,
        "c": format_fraction(args.c),
        "delta": format_fraction(args.delta),
        "basis": [list(p) for p in partitions(args.level)],
        "vectors": [[_fr(cf) for cf in v.coefficients()] for v in vecs],
    }
    _emit(json.dumps(payload), args, "virasoro singular")
    return EXIT_OK


def cmd_gram(args) -> int:
    g = gram_matrix(args.level, _params(args))
    payload = {
        "level": args.level,
        "basis": [list(p) for p in partitions(args.level)],
        "gram": [[_fr(x) for x in row] for row in g],
    }
    _emit(json.dumps(payload), args, "virasoro gram")
    return EXIT_OK


def _module_from_args(args):
    if args.model is not None:
        if args.module is None:
            raise UsageError("--model needs --module r,s")
        p, pp = args.model
        r, s = args.module
        return VermaParams(minimal_model_c(p, pp), minimal_model_weight(p, pp, r, s))
    if args.c is None or args.delta is None:
        raise UsageError("give either --model/--module or --c/--delta")
    return VermaParams(args.c, args.delta)


def cmd_reduce(args) -> int:
    params = _module_from_args(args)
    level = sum(next(iter(args.terms)))
    v = PBWVector(level, args.terms, params)
    gens = primitive_singular_vectors(params, max(level, 1))
    residue = submodule_reduce(v, gens)
    payload = {
        "c": format_fraction(params.c.constant_value()),
        "delta": format_fraction(params.delta.constant_value()),
        "vector": v.to_dict(include_params=False),
        "generator_levels": [g.level for g in gens],
        "residue": residue.to_dict(include_params=False),
        "null": residue.is_zero(),
    }
    _emit(json.dumps(payload), args, "virasoro reduce")
    if args.expect_null and not residue.is_zero():
        return EXIT_CHECK
    return EXIT_OK


def cmd_solve_kappa(args) -> int:
    p, pp = args.model
    r, s = args.module
    res = solve_kappa_null(args.grade, args.sign, p, pp, r, s)
    _emit(json.dumps(res.to_dict(), sort_keys=True), args, "bridge solve-kappa")
    return EXIT_OK


def cmd_obstruction(args) -> int:
    if args.grade < 2:
        raise UsageError("the obstruction is defined for --grade >= 2")
    v = obstruction_L1(CandidateSpec(args.grade, args.sign))
    payload = {
        "grade": args.grade,
        "sign": args.sign,
        "level": v.level,
        "terms": [{"partition": list(p), "coeff": str(cf)} for p, cf in sorted(v.terms.items(), reverse=True)],
        "vector": v.to_dict(include_params=False),
    }
    _emit(json.dumps(payload), args, "bridge obstruction")
    return EXIT_OK


def _default_z(n: int) -> complex:
    if n == 1:
        return 2j
    return complex(1.5 * np.exp(1j * np.pi / (2 * n)))


def cmd_stats(args) -> int:
    if args.seed is None:
        raise UsageError("--seed is required for stochastic commands")
    z = args.z if args.z is not None else _default_z(args.grade)
    common = dict(N=args.N, seed=args.seed, dt=args.dt, shared_seeds=args.shared_seeds)
    try:
        if args.experiment == "scale-invariance":
            rep = scale_invariance_experiment(args.grade, args.kappa, args.alpha, z, args.t, **common)
        elif args.experiment == "stationarity":
            rep = stationarity_experiment(args.grade, args.kappa, args.t0, args.t1, z, **common)
        else:
            rep = backward_law_experiment(args.grade, args.kappa, args.t, z, **common)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    _emit(rep.to_json(), args, f"stats {args.experiment}", args.seed)
    return EXIT_OK


def cmd_selftest(args) -> int:
    from .acceptance import run_all

    results = run_all(skip_slow=args.skip_slow, echo=None)
    width = max(len(r.name) for r in results)
    print(f"{'#':>2}  {'criterion':<{width}}  status  seconds")
    for r in results:
        print(f"{r.number:>2}  {r.name:<{width}}  {'PASS' if r.ok else 'FAIL':<6}  {r.seconds:7.2f}")
        if args.verbose:
            print(f"    {r.detail}")
    return EXIT_OK if all(r.ok for r in results) else EXIT_CHECK


# parser ------------------------------------------------------------------------

def _positive_int(text):
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def _flow_flags(p, with_sign=True):
    p.add_argument("--grade", type=_positive_int, default=1)
    p.add_argument("--kappa", type=float, default=0.0)
    p.add_argument("--dt", type=float, default=1e-4)
    p.add_argument("--eps-swallow", type=float, default=1e-8)
    p.add_argument("--seed", type=int)
    p.add_argument("--out")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    if with_sign:
        p.add_argument("--sign", type=int, choices=(1, 2), default=1)


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="slelab", description="Grade-n Loewner flows and Virasoro null vectors.")
    ap.add_argument("--version", action="version", version=f"slelab {__version__}")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("trace", help="sample the trace of a grade-n evolution")
    _flow_flags(p)
    p.add_argument("--T", type=float, default=1.0)
    p.add_argument("--times", type=parse_float_list, help="comma-separated sample times")
    p.set_defaults(func=cmd_trace)

    p = sub.add_parser("hull", help="swallow times on a grid")
    _flow_flags(p, with_sign=False)
    p.add_argument("--t", type=float, default=1.0)
    p.add_argument("--grid", type=parse_grid, default=parse_grid("-2,2,0,2,41,21"))
    p.set_defaults(func=cmd_hull)

    vir = sub.add_parser("virasoro", help="exact Verma-module computations")
    vsub = vir.add_subparsers(dest="action", required=True, parser_class=_Parser)
    for name, fn in (("singular", cmd_singular), ("gram", cmd_gram)):
        p = vsub.add_parser(name)
        p.add_argument("--level", type=_positive_int, required=True)
        p.add_argument("--c", type=parse_fraction, required=True)
        p.add_argument("--delta", type=parse_fraction, required=True)
        p.add_argument("--out")
        p.set_defaults(func=fn)
    p = vsub.add_parser("reduce", help="reduce a vector modulo the singular submodule")
    p.add_argument("--terms", type=parse_terms, required=True, help="e.g. '4:1;2,2:-5/3'")
    p.add_argument("--model", type=parse_int_pair)
    p.add_argument("--module", type=parse_int_pair)
    p.add_argument("--c", type=parse_fraction)
    p.add_argument("--delta", type=parse_fraction)
    p.add_argument("--expect-null", action="store_true")
    p.add_argument("--out")
    p.set_defaults(func=cmd_reduce)

    br = sub.add_parser("bridge", help="kappa from null-vector conditions")
    bsub = br.add_subparsers(dest="action", required=True, parser_class=_Parser)
    p = bsub.add_parser("solve-kappa")
    p.add_argument("--grade", type=_positive_int, required=True)
    p.add_argument("--sign", type=int, choices=(1, 2), required=True)
    p.add_argument("--model", type=parse_int_pair, required=True)
    p.add_argument("--module", type=parse_int_pair, required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_solve_kappa)
    p = bsub.add_parser("obstruction")
    p.add_argument("--grade", type=_positive_int, required=True)
    p.add_argument("--sign", type=int, choices=(1, 2), required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_obstruction)

    st = sub.add_parser("stats", help="Kolmogorov-Smirnov law-equality experiments")
    st.add_argument("experiment", choices=("scale-invariance", "stationarity", "backward-law"))
    st.add_argument("--grade", type=_positive_int, default=1)
    st.add_argument("--kappa", type=float, default=2.0)
    st.add_argument("--alpha", type=float, default=2.0)
    st.add_argument("--t", type=float, default=0.25)
    st.add_argument("--t0", type=float, default=0.1)
    st.add_argument("--t1", type=float, default=0.35)
    st.add_argument("--z", type=parse_complex)
    st.add_argument("--N", type=_positive_int, default=2000)
    st.add_argument("--dt", type=float, default=1e-4)
    st.add_argument("--seed", type=int)
    st.add_argument("--shared-seeds", action="store_true")
    st.add_argument("--out")
    st.set_defaults(func=cmd_stats)

    p = sub.add_parser("selftest", help="run the acceptance criteria")
    p.add_argument("--skip-slow", action="store_true", help="skip the Monte Carlo criterion")
    p.add_argument("--verbose", "-v", action="store_true")
    p.set_defaults(func=cmd_selftest)
    return ap


_NEG_VALUE = re.compile(r"-\d[\d./eE+-]*")


def _glue_negative_values(argv: list) -> list:
    """Turn ``--c -22/5`` into ``--c=-22/5`` so argparse does not read a flag."""
    out = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        if (tok.startswith("--") and "=" not in tok and i + 1 < len(argv)
                and _NEG_VALUE.fullmatch(argv[i + 1])):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
            continue
        out.append(tok)
        i += 1
    return out


def main(argv=None) -> int:
    parser = build_parser()
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        args = parser.parse_args(_glue_negative_values(argv))
    except SystemExit as exc:  # usage errors, --help, --version
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        return args.func(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"slelab: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (BranchError, SwallowedError, DomainError, ZeroDivisionError, FloatingPointError) as exc:
        print(f"slelab: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except ValueError as exc:
        print(f"slelab: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
