"""Command-line front end.

Subcommands: survey (measure glitches of a bound function and update a
glitch database), refine (run lower/upper refinement against a database
entry), trig-split (periodic inverse propagation), worst-case (argument
search for the reduction precision analysis). All numeric I/O is C99
hex-float literals so output parses back bit-exactly; reports are
plain line-oriented text with a stable field order.

Exit codes: 0 success; 2 survey hit domain holes; 3 refinement proved
no solution (status 0/5); 4 refinement returned a non-tight or
one-sided status (1, 2, 6, 7); 5 missing glitch-db entry; 64 usage
errors; 70 internal contract violations.
"""

from __future__ import annotations

import argparse
import math
import os
import sys

import numpy as np

from . import oracle as _oracle
from .errors import DbParseError, GlitchPropError
from .formats import BINARY32, BINARY64, FloatFormat, FloatInterval, format_by_name
from .glitches import (GlitchDbRow, MonotoneClass, load_glitch_db,
                       store_glitch_db, survey_glitches)
from .reduction import PeriodClass, ReductionConfig, worst_case_search
from .refine import CallBudgetReport, RefineParams, lower_bound, upper_bound
from .synth import DippedIdentity, OrdinalAffine
from .trig import TrigQuery, compute_bounds_trig

EXIT_OK = 0
EXIT_HOLES = 2
EXIT_NO_SOLUTION = 3
EXIT_NOT_TIGHT = 4
EXIT_NO_DB_ENTRY = 5
EXIT_USAGE = 64
EXIT_CONTRACT = 70


def _hex(x: float) -> str:
    return float(x).hex()


def _parse_float(tok: str) -> float:
    try:
        return float.fromhex(tok)
    except ValueError:
        return float(tok)


def _parse_interval(text: str, fmt: FloatFormat) -> FloatInterval:
    t = text.strip()
    if t.startswith("[") and t.endswith("]"):
        t = t[1:-1]
    parts = t.split(",")
    if len(parts) != 2:
        raise ValueError(f"expected [lo,hi], got {text!r}")
    return FloatInterval(_parse_float(parts[0]), _parse_float(parts[1]), fmt)


class FunctionBinding:
    """A named float -> float function with format, vectorized form and
    an optional rough inverse."""

    def __init__(self, name, fmt, scalar, vector=None, inverse=None):
        self.name = name
        self.format = fmt
        self.scalar = scalar
        self.vector = vector
        self.inverse = inverse if inverse is not None else (lambda y: math.nan)

    def __call__(self, x):
        if isinstance(x, np.ndarray) and self.vector is not None:
            return self.vector(x)
        return self.scalar(x)


def _f32(fn):
    def scalar(x: float) -> float:
        return float(fn(np.float32(x)))
    return scalar


def _libm_bindings() -> dict:
    out = {}
    table64 = {
        "exp": (np.exp, np.log), "log": (np.log, np.exp),
        "sin": (np.sin, None), "cos": (np.cos, None), "tan": (np.tan, None),
        "sqrt": (np.sqrt, lambda y: y * y), "atan": (np.arctan, np.tan),
        "sinh": (np.sinh, np.arcsinh), "asinh": (np.arcsinh, np.sinh),
    }
    for name, (fn, inv) in table64.items():
        out[name] = FunctionBinding(
            name, BINARY64, lambda x, fn=fn: float(fn(x)),
            lambda xs, fn=fn: fn(xs),
            None if inv is None else (lambda y, inv=inv: float(inv(y))))
    for name64, name32 in [("exp", "expf"), ("log", "logf"), ("sin", "sinf"),
                           ("cos", "cosf"), ("tan", "tanf"), ("sqrt", "sqrtf"),
                           ("atan", "atanf"), ("sinh", "sinhf")]:
        fn, inv = table64[name64]
        out[name32] = FunctionBinding(
            name32, BINARY32, _f32(fn),
            lambda xs, fn=fn: fn(xs.astype(np.float32)),
            None if inv is None else (lambda y, inv=inv: float(np.float32(inv(np.float32(y))))))
    return out


_LIBM = _libm_bindings()


def resolve_function(name: str) -> FunctionBinding:
    if name in _LIBM:
        return _LIBM[name]
    if name.startswith("synth:"):
        return _resolve_synth(name)
    raise GlitchPropError(f"unknown function {name!r}")


def _resolve_synth(name: str) -> FunctionBinding:
    parts = name.split(":")
    kind = parts[1] if len(parts) > 1 else ""
    if kind == "identity":
        f = OrdinalAffine(BINARY64, slope=1)
        return FunctionBinding(name, BINARY64, f, f, f.rough_inverse())
    if kind == "glitch1":
        base = BINARY64.ordinal(1.0)
        f = DippedIdentity(BINARY64, dips=((base + 64, 5, 3),))
        return FunctionBinding(name, BINARY64, f, f, f.rough_inverse())
    if kind == "glitchk":
        try:
            k = int(parts[2])
            seed = int(parts[3]) if len(parts) > 3 else 0
        except (IndexError, ValueError):
            raise GlitchPropError(
                "synth:glitchk takes synth:glitchk:<count>[:<seed>]") from None
        rng = np.random.default_rng(seed)
        base = BINARY64.ordinal(1.0)
        dips = []
        cursor = base + 16
        for _ in range(k):
            cursor += int(rng.integers(8, 512))
            width = int(rng.integers(1, 9))
            depth = int(rng.integers(1, 6))
            dips.append((cursor, width, depth))
            cursor += width + 2
        f = DippedIdentity(BINARY64, dips=tuple(dips))
        return FunctionBinding(name, BINARY64, f, f, f.rough_inverse())
    raise GlitchPropError(f"unknown synthetic function {name!r}")


def default_domain(binding: FunctionBinding) -> FloatInterval:
    fmt = binding.format
    lo = 1.0
    return FloatInterval(lo, fmt.succ_n(lo, 1 << 16), fmt)


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_survey(args) -> int:
    binding = resolve_function(args.fn)
    fmt = binding.format
    domain = (_parse_interval(args.domain, fmt) if args.domain
              else default_domain(binding))
    expected = MonotoneClass(args.expected_class)
    survey = survey_glitches(binding, domain, expected,
                             function_name=binding.name, jobs=args.jobs)
    s = survey.summary
    print(f"summary {binding.name} {fmt.name} {s.n_g} {s.d_M} {s.w_M} "
          f"{_hex(s.alpha)} {_hex(s.omega)} evals={survey.evaluations} "
          f"holes={survey.holes}")
    for g in survey.glitches:
        print(f"glitch {_hex(g.start)} {_hex(g.end)} {g.width} {g.depth} "
              f"{_hex(g.ref_max)}")
    if args.out:
        entries = {}
        if os.path.exists(args.out):
            entries = dict(load_glitch_db(args.out))
        entries[binding.name] = GlitchDbRow(fmt, s)
        store_glitch_db(args.out, entries)
    return EXIT_HOLES if survey.holes else EXIT_OK


def _load_entry(path: str, name: str):
    rows = load_glitch_db(path)
    if name not in rows:
        return None
    return rows[name]


def cmd_refine(args) -> int:
    binding = resolve_function(args.fn)
    fmt = binding.format
    iv = _parse_interval(args.interval, fmt)
    y = _parse_float(args.y)
    row = _load_entry(args.glitch_db, binding.name) if args.glitch_db else None
    if args.glitch_db and row is None:
        print(f"error: no glitch-db entry for {binding.name}", file=sys.stderr)
        return EXIT_NO_DB_ENTRY
    if row is not None:
        bounds = row.bounds.clamped_to(iv)
    else:
        from .glitches import NO_GLITCHES
        bounds = NO_GLITCHES
    params = RefineParams(glitch=bounds, s=args.s, t=args.t,
                          f_inv=binding.inverse)
    statuses = []
    if args.bound in ("lower", "both"):
        rep = CallBudgetReport()
        res = lower_bound(binding, y, iv, params, rep)
        print(f"lower {_hex(res.value)} {res.status} {rep.f_calls}")
        statuses.append(res.status)
    if args.bound in ("upper", "both"):
        rep = CallBudgetReport()
        res = upper_bound(binding, y, iv, params, rep)
        print(f"upper {_hex(res.value)} {res.status} {rep.f_calls}")
        statuses.append(res.status)
    if args.oracle:
        ans = _oracle.brute_refine(binding, y, iv)
        left = "-" if ans.leftmost_sol is None else _hex(ans.leftmost_sol)
        right = "-" if ans.rightmost_sol is None else _hex(ans.rightmost_sol)
        print(f"oracle {left} {right} below_all={ans.below_all} "
              f"above_all={ans.above_all}")
    if any(r in (0, 5) for r in statuses):
        return EXIT_NO_SOLUTION
    if any(r in (1, 2, 6, 7) for r in statuses):
        return EXIT_NOT_TIGHT
    return EXIT_OK


def cmd_trig_split(args) -> int:
    binding = resolve_function(args.fn)
    fmt = binding.format
    x_iv = _parse_interval(args.x, fmt)
    y_iv = _parse_interval(args.y, fmt)
    row = _load_entry(args.glitch_db, binding.name) if args.glitch_db else None
    if args.glitch_db and row is None:
        print(f"error: no glitch-db entry for {binding.name}", file=sys.stderr)
        return EXIT_NO_DB_ENTRY
    if row is not None:
        bounds = row.bounds.clamped_to(x_iv)
    else:
        from .glitches import NO_GLITCHES
        bounds = NO_GLITCHES
    q = TrigQuery(f=binding, f_inv=binding.inverse,
                  pclass=PeriodClass(args.pclass), y=y_iv, x=x_iv,
                  glitch=bounds, g=args.g, s=args.s, t=args.t)
    for r in compute_bounds_trig(q):
        print(f"{binding.name} {_hex(r.x_lo)} {_hex(r.x_hi)} {_hex(r.l)} "
              f"{r.r_l} {_hex(r.u)} {r.r_u} {r.k}")
    return EXIT_OK


def cmd_worst_case(args) -> int:
    fmt = format_by_name(args.format)
    cfg = ReductionConfig.for_format(fmt)
    domain = (_parse_interval(args.domain, fmt) if args.domain
              else FloatInterval(-cfg.l_max, cfg.l_max, fmt))
    threshold = _parse_float(args.threshold)
    for x, delta in worst_case_search(fmt, domain, threshold):
        print(f"{_hex(x)} {_hex(delta)}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="glitchprop",
                description="Glitch-aware interval refinement toolkit")
    sub = p.add_subparsers(dest="command", required=True)

    jobs_default = int(os.environ.get("GLITCHPROP_JOBS", "1"))

    ps = sub.add_parser("survey", help="measure monotonicity glitches")
    ps.add_argument("--fn", required=True)
    ps.add_argument("--domain", help="[lo,hi] (hex floats)")
    ps.add_argument("--class", dest="expected_class", default="isotonic",
                    choices=["isotonic", "antitonic"])
    ps.add_argument("--jobs", type=int, default=jobs_default)
    ps.add_argument("--out", help="glitch database file to update")
    ps.set_defaults(func=cmd_survey)

    pr = sub.add_parser("refine", help="refine one bound of y = f(x)")
    pr.add_argument("--fn", required=True)
    pr.add_argument("--y", required=True)
    pr.add_argument("--interval", required=True)
    pr.add_argument("--glitch-db")
    pr.add_argument("--s", type=int, default=8)
    pr.add_argument("--t", type=int, default=64)
    pr.add_argument("--bound", default="both", choices=["lower", "upper", "both"])
    pr.add_argument("--oracle", action="store_true",
                    help="also print the brute-force answer (small intervals)")
    pr.set_defaults(func=cmd_refine)

    pt = sub.add_parser("trig-split", help="periodic inverse propagation")
    pt.add_argument("--fn", required=True)
    pt.add_argument("--pclass", required=True,
                    choices=[c.value for c in PeriodClass])
    pt.add_argument("--y", required=True, help="[y_l,y_u]")
    pt.add_argument("--x", required=True, help="[x_l,x_u]")
    pt.add_argument("--g", type=int, default=8)
    pt.add_argument("--glitch-db")
    pt.add_argument("--s", type=int, default=8)
    pt.add_argument("--t", type=int, default=64)
    pt.set_defaults(func=cmd_trig_split)

    pw = sub.add_parser("worst-case", help="argument search for reduction")
    pw.add_argument("--format", default="binary32",
                    choices=["binary32", "binary64"])
    pw.add_argument("--domain", help="[lo,hi]; defaults to [-l_max, l_max]")
    pw.add_argument("--threshold", default="0x1p-25")
    pw.set_defaults(func=cmd_worst_case)

    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except DbParseError as e:
        print(f"glitchprop: glitch-db parse error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except GlitchPropError as e:
        print(f"glitchprop: {e}", file=sys.stderr)
        return EXIT_CONTRACT
    except ValueError as e:
        print(f"glitchprop: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
