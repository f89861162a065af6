"""Glitch summaries, glitch surveying and quasi-monotonic decomposition.

A function f that implements an isotonic real function may still dip
below its own running maximum on short stretches; those stretches are
its glitches. The surveyor scans an implementation over a float
interval, records every maximal run of points lying strictly below the
running maximum (position, width in floats, depth in float steps of the
output format), and produces a `GlitchBounds` summary fit for the
refinement engine.

Summary bounds cover anomalies in both scan directions: a point is
anomalous if it lies below the left-to-right running maximum *or* above
the right-to-left running minimum. The second kind matters because
lower-bound refinement walks the interval from the other side; a
summary covering only one kind would underestimate what that search can
meet. `alpha`/`omega` are therefore the outer non-anomalous neighbors
(one float before the first anomalous point, one after the last), and
`n_g`/`w_M` count the merged anomalous runs, which can exceed the
number and width of the recorded dips alone.
"""

from __future__ import annotations

import enum
import math
import os
import tempfile
import typing
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .errors import ContractError, DbParseError, DomainError, RangeError
from .formats import BINARY32, BINARY64, FloatFormat, FloatInterval, format_by_name

if typing.TYPE_CHECKING:
    from .reduction import PeriodClass, ReductionConfig

__all__ = [
    "MonotoneClass",
    "GlitchBounds",
    "GlitchRecord",
    "GlitchSurvey",
    "survey_glitches",
    "quasi_monotone_split",
    "load_glitch_db",
    "store_glitch_db",
    "GlitchDbRow",
]


class MonotoneClass(enum.Enum):
    ISOTONIC = "isotonic"
    ANTITONIC = "antitonic"


@dataclass(frozen=True)
class GlitchBounds:
    """Per-function glitch summary consumed by the refinement algorithms.

    n_g bounds the number of anomalous runs, d_M their depth in float
    steps of the output, w_M their width in floats, and [alpha, omega]
    encloses them with one non-anomalous float of slack on each side
    (alpha precedes the first anomalous point, omega follows the last).
    With n_g == 0 the other fields are ignored by every consumer.
    """

    n_g: int
    d_M: int
    w_M: int
    alpha: float
    omega: float

    def __post_init__(self):
        for name in ("n_g", "d_M", "w_M"):
            v = getattr(self, name)
            if not isinstance(v, int) or v < 0:
                raise DomainError(f"{name} must be a nonnegative integer, got {v!r}")

    def require_for(self, iv: FloatInterval) -> None:
        """Check the caller-side precondition n_g > 0 => x_l <= alpha <= omega <= x_u."""
        if self.n_g == 0:
            return
        fmt = iv.fmt
        if not (fmt.le(iv.lo, self.alpha) and fmt.le(self.alpha, self.omega)
                and fmt.le(self.omega, iv.hi)):
            raise ContractError(
                f"glitch bounds [{self.alpha!r}, {self.omega!r}] not nested in "
                f"[{iv.lo!r}, {iv.hi!r}]")

    def clamped_to(self, iv: FloatInterval) -> "GlitchBounds":
        """Restrict to a sub-interval; empty intersection drops all glitches."""
        fmt = iv.fmt
        if self.n_g == 0 or fmt.lt(iv.hi, self.alpha) or fmt.lt(self.omega, iv.lo):
            return NO_GLITCHES
        return GlitchBounds(self.n_g, self.d_M, self.w_M,
                            fmt.fmax(self.alpha, iv.lo), fmt.fmin(self.omega, iv.hi))

    def reflected(self) -> "GlitchBounds":
        """Bounds valid for x -> -f(-x) when self is valid for f."""
        if self.n_g == 0:
            return self
        return GlitchBounds(self.n_g, self.d_M, self.w_M, -self.omega, -self.alpha)


NO_GLITCHES = GlitchBounds(0, 0, 0, 0.0, 0.0)


@dataclass(frozen=True)
class GlitchRecord:
    """One maximal run of floats lying strictly below the running maximum."""

    start: float
    end: float
    width: int
    depth: int
    ref_max: float  # running extremum the run violates

    def __post_init__(self):
        if self.width < 1 or self.depth < 1:
            raise DomainError("glitch width and depth must be positive")


@dataclass(frozen=True)
class GlitchSurvey:
    function_name: str
    format: FloatFormat
    domain: FloatInterval
    glitches: tuple
    summary: GlitchBounds
    evaluations: int
    holes: int = 0  # points where f returned NaN


# ---------------------------------------------------------------------------
# numpy ordinal conversions (the surveyor works on value ordinals so the
# float compare semantics, signed zeros included, are the total order's)
# ---------------------------------------------------------------------------

def _np_from_ordinals(o: np.ndarray, fmt: FloatFormat) -> np.ndarray:
    neg = o < 0
    mag = np.where(neg, -o - 1, o)
    if fmt.width == 32:
        bits = mag.astype(np.uint32)
        bits |= np.where(neg, np.uint32(0x80000000), np.uint32(0))
        return bits.view(np.float32)
    bits = mag.astype(np.uint64)
    bits |= np.where(neg, np.uint64(1) << np.uint64(63), np.uint64(0))
    return bits.view(np.float64)


def _np_to_ordinals(v: np.ndarray, fmt: FloatFormat) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Return (ordinals int64, nan mask, inf mask)."""
    if fmt.width == 32:
        bits = np.ascontiguousarray(v, dtype=np.float32).view(np.uint32)
        sign = (bits >> np.uint32(31)).astype(bool)
        mag = (bits & np.uint32(0x7FFFFFFF)).astype(np.int64)
        inf_bits = 0x7F800000
    else:
        bits = np.ascontiguousarray(v, dtype=np.float64).view(np.uint64)
        sign = (bits >> np.uint64(63)).astype(bool)
        mag = (bits & np.uint64(0x7FFFFFFFFFFFFFFF)).astype(np.int64)
        inf_bits = 0x7FF0000000000000
    ords = np.where(sign, -mag - 1, mag)
    return ords, mag > inf_bits, mag == inf_bits


def _evaluate_chunk(f, xs: np.ndarray) -> np.ndarray:
    try:
        out = f(xs)
        out = np.asarray(out)
        if out.shape == xs.shape:
            return out
    except (TypeError, ValueError):
        pass
    return np.array([f(float(x)) for x in xs], dtype=np.float64)


def _windowed_map(fn, items, jobs: int):
    """map with a bounded prefetch window; order-preserving for any jobs."""
    if jobs == 1:
        yield from map(fn, items)
        return
    import collections
    import itertools

    with ThreadPoolExecutor(max_workers=jobs) as pool:
        pending = collections.deque()
        it = iter(items)
        for item in itertools.islice(it, jobs + 1):
            pending.append(pool.submit(fn, item))
        while pending:
            fut = pending.popleft()
            nxt = next(it, None)
            if nxt is not None:
                pending.append(pool.submit(fn, nxt))
            yield fut.result()


# ---------------------------------------------------------------------------
# scan state machine
# ---------------------------------------------------------------------------

class _RunScanner:
    """Online detector of maximal runs below the running maximum.

    Consumes value ordinals chunk by chunk (x ordinals implicit and
    increasing); NaN/inf points close the current run and reset the
    running maximum, so no run ever spans a nonfinite point.
    """

    def __init__(self):
        self.carry: int | None = None       # running max since last reset
        self.open: list | None = None       # [start_o, end_o, min_v, ref_max]
        self.runs: list[tuple[int, int, int, int]] = []
        self.holes = 0

    def _close(self):
        if self.open is not None:
            self.runs.append(tuple(self.open))
            self.open = None

    def feed(self, x0: int, v: np.ndarray, nan: np.ndarray, inf: np.ndarray):
        bad = nan | inf
        if not bad.any():
            self._feed_segment(x0, v)
            return
        idx = np.flatnonzero(bad)
        self.holes += int(nan.sum())
        prev = 0
        for i in idx:
            if i > prev:
                self._feed_segment(x0 + prev, v[prev:i])
            self._close()
            self.carry = None
            prev = int(i) + 1
        if prev < len(v):
            self._feed_segment(x0 + prev, v[prev:])

    def _feed_segment(self, x0: int, v: np.ndarray):
        if len(v) == 0:
            return
        rm = np.maximum.accumulate(v)
        if self.carry is not None:
            rm = np.maximum(rm, self.carry)
        mask = v < rm
        self.carry = int(rm[-1])
        if not mask.any():
            self._close()
            return
        edges = np.flatnonzero(np.diff(mask.astype(np.int8)))
        starts = [0] if mask[0] else []
        starts += [int(e) + 1 for e in edges if not mask[e]]
        ends = [int(e) for e in edges if mask[e]]
        if mask[-1]:
            ends.append(len(v) - 1)
        for a, b in zip(starts, ends):
            lo_v = int(v[a:b + 1].min())
            ref = int(rm[a])
            if a == 0 and self.open is not None:
                self.open[1] = x0 + b
                self.open[2] = min(self.open[2], lo_v)
            else:
                self._close()
                self.open = [x0 + a, x0 + b, lo_v, ref]
            if b != len(v) - 1:
                self._close()

    def finish(self) -> list[tuple[int, int, int, int]]:
        self._close()
        return self.runs


def _merge_runs(a: list[tuple[int, int]], b: list[tuple[int, int]]) -> list[tuple[int, int]]:
    merged: list[list[int]] = []
    for s, e in sorted(a + b):
        if merged and s <= merged[-1][1] + 1:
            merged[-1][1] = max(merged[-1][1], e)
        else:
            merged.append([s, e])
    return [(s, e) for s, e in merged]


def survey_glitches(f, domain: FloatInterval, expected: MonotoneClass, *,
                    function_name: str = "f", jobs: int = 1,
                    chunk_size: int = 1 << 16) -> GlitchSurvey:
    """Scan f over `domain` and measure its monotonicity glitches.

    `f` maps floats of the domain's format to floats of the same format;
    it may also accept numpy arrays, which is strongly advised for large
    domains. `expected` states the monotonicity the underlying real
    function has on the domain. With jobs > 1 the chunks are evaluated
    by a thread pool, which requires f to be callable concurrently; the
    result is identical for any job count.
    """
    if expected not in (MonotoneClass.ISOTONIC, MonotoneClass.ANTITONIC):
        raise DomainError(f"bad monotone class {expected!r}")
    if jobs < 1:
        raise DomainError("jobs must be >= 1")
    fmt = domain.fmt
    o_lo, o_hi = fmt.ordinal(domain.lo), fmt.ordinal(domain.hi)
    flip_values = expected is MonotoneClass.ANTITONIC

    evaluations = 0

    def chunk_starts(reverse: bool):
        n = o_hi - o_lo + 1
        offs = range(0, n, chunk_size)
        return reversed(list(offs)) if reverse else offs

    def eval_at(off: int) -> tuple[int, np.ndarray, np.ndarray, np.ndarray]:
        a = o_lo + off
        b = min(a + chunk_size, o_hi + 1)
        xs = _np_from_ordinals(np.arange(a, b, dtype=np.int64), fmt)
        vals = _evaluate_chunk(f, xs)
        v, nan, inf = _np_to_ordinals(vals, fmt)
        return a, v, nan, inf

    def run_pass(reverse: bool) -> _RunScanner:
        nonlocal evaluations
        scanner = _RunScanner()
        for a, v, nan, inf in _windowed_map(eval_at, chunk_starts(reverse), jobs):
            evaluations += len(v)
            if flip_values:
                v = -v - 1  # order-reversing; exact on int64 ordinals
            if reverse:
                # reflected coordinates: scan right-to-left by negating
                # both the x ordinals and the value ordinals
                b = a + len(v) - 1
                scanner.feed(-b, (-v - 1)[::-1], nan[::-1], inf[::-1])
            else:
                scanner.feed(a, v, nan, inf)
        scanner.finish()
        return scanner

    fwd = run_pass(reverse=False)
    bwd = run_pass(reverse=True)

    records = []
    for s, e, min_v, ref in fwd.runs:
        records.append(GlitchRecord(
            start=fmt.from_ordinal(s), end=fmt.from_ordinal(e),
            width=e - s + 1, depth=ref - min_v,
            ref_max=fmt.from_ordinal(-ref - 1 if flip_values else ref)))

    dips = [(s, e) for s, e, _, _ in fwd.runs]
    spikes = [(-e, -s) for s, e, _, _ in bwd.runs]  # un-reflect
    union = _merge_runs(dips, spikes)

    if union:
        max_fin = fmt.ordinal(fmt.max_finite)
        alpha_o = max(union[0][0] - 1, -max_fin - 1)
        omega_o = min(union[-1][1] + 1, max_fin)
        summary = GlitchBounds(
            n_g=len(union),
            d_M=max(ref - mv for _, _, mv, ref in fwd.runs),
            w_M=max(e - s + 1 for s, e in union),
            alpha=fmt.from_ordinal(alpha_o),
            omega=fmt.from_ordinal(omega_o))
    else:
        summary = NO_GLITCHES

    return GlitchSurvey(function_name=function_name, format=fmt, domain=domain,
                        glitches=tuple(records), summary=summary,
                        evaluations=evaluations, holes=fwd.holes + bwd.holes)


# ---------------------------------------------------------------------------
# quasi-monotonic decomposition of trig domains
# ---------------------------------------------------------------------------

def quasi_monotone_split(p: "PeriodClass", domain: FloatInterval,
                         cfg: "ReductionConfig | None" = None):
    """Partition `domain` into maximal single-branch pieces.

    Pieces are delimited by the float neighbors of the tonicity-change
    multiples of pi/2 for the period class, alternate between isotonic
    and antitonic (all isotonic for the discontinuous class), and tile
    the domain exactly. Requires domain within [-l_max, l_max].
    """
    from .reduction import (ReductionConfig, div_pio2_up, geq_tonicity_change,
                            pio2_mult_down, quasi_isotonic)

    fmt = domain.fmt
    if cfg is None:
        cfg = ReductionConfig.for_format(fmt)
    if abs(domain.lo) > cfg.l_max or abs(domain.hi) > cfg.l_max:
        raise RangeError("domain exceeds l_max for quasi-monotonic splitting")

    out: list[tuple[FloatInterval, MonotoneClass]] = []
    k = geq_tonicity_change(p, div_pio2_up(domain.lo, cfg))
    cur_lo = domain.lo
    while True:
        piece_hi = fmt.fmin(domain.hi, pio2_mult_down(k, cfg))
        cls = MonotoneClass.ISOTONIC if quasi_isotonic(k, p) else MonotoneClass.ANTITONIC
        out.append((FloatInterval(cur_lo, piece_hi, fmt), cls))
        if fmt.eq(piece_hi, domain.hi):
            return out
        cur_lo = fmt.succ(piece_hi)
        k += 2


# ---------------------------------------------------------------------------
# glitch database (line-oriented text, hex floats, bit-exact round trips)
# ---------------------------------------------------------------------------

_DB_HEADER = "glitchdb v1"


class GlitchDbRow(typing.NamedTuple):
    format: FloatFormat
    bounds: GlitchBounds


def store_glitch_db(path, entries: typing.Mapping[str, GlitchDbRow]) -> None:
    """Write the database atomically (temp file + rename)."""
    lines = [_DB_HEADER]
    for name in sorted(entries):
        fmt, b = entries[name]
        if any(c.isspace() for c in name):
            raise DomainError(f"function name {name!r} contains whitespace")
        lines.append(f"{name} {fmt.name} {b.n_g} {b.d_M} {b.w_M} "
                     f"{float(b.alpha).hex()} {float(b.omega).hex()}")
    path = os.fspath(path)
    d = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".glitchdb-")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write("\n".join(lines) + "\n")
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def load_glitch_db(path) -> dict[str, GlitchDbRow]:
    with open(path, "r") as fh:
        raw = fh.read().splitlines()
    if not raw or raw[0].strip() != _DB_HEADER:
        raise DbParseError(1, f"missing header {_DB_HEADER!r}")
    out: dict[str, GlitchDbRow] = {}
    for lineno, line in enumerate(raw[1:], start=2):
        if not line.strip():
            continue
        toks = line.split()
        if len(toks) != 7:
            raise DbParseError(lineno, f"expected 7 fields, got {len(toks)}")
        name, fmt_name, sn, sd, sw, sa, so = toks
        if name in out:
            raise DbParseError(lineno, f"duplicate entry for {name!r}")
        try:
            fmt = format_by_name(fmt_name)
        except DomainError as e:
            raise DbParseError(lineno, str(e)) from None
        try:
            n_g, d_M, w_M = int(sn), int(sd), int(sw)
        except ValueError:
            raise DbParseError(lineno, "counts must be integers") from None
        try:
            alpha, omega = float.fromhex(sa), float.fromhex(so)
        except ValueError:
            raise DbParseError(lineno, "alpha/omega must be hex float literals") from None
        try:
            bounds = GlitchBounds(n_g, d_M, w_M, alpha, omega)
            fmt.check_value(alpha, "alpha")
            fmt.check_value(omega, "omega")
        except DomainError as e:
            raise DbParseError(lineno, str(e)) from None
        if math.isinf(alpha) or math.isinf(omega):
            raise DbParseError(lineno, "alpha/omega must be finite")
        if n_g > 0 and not fmt.le(alpha, omega):
            raise DbParseError(lineno, "alpha must not exceed omega when n_g > 0")
        out[name] = GlitchDbRow(fmt, bounds)
    return out
