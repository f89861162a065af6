"""Synthetic quasi-monotonic functions with exactly known glitches.

These families drive the test and acceptance suites (and the CLI's
`synth:` namespace) without trusting the host libm: functions are
defined directly on float ordinals, so glitch positions, widths and
depths are exact by construction. Ground-truth helpers recompute the
anomaly geometry from the value table by definition, independently of
the surveyor.
"""

from __future__ import annotations

import math
from typing import Optional

import numpy as np

from .errors import ContractError, DomainError
from .formats import BINARY64, FloatFormat, FloatInterval
from .glitches import GlitchBounds, MonotoneClass, NO_GLITCHES

__all__ = [
    "OrdinalAffine",
    "TabulatedFunction",
    "DippedIdentity",
    "monotone_values",
    "inject_dip",
    "dip_records_of",
    "hull_summary_of",
    "exact_bounds",
    "trig_model",
]


def _to_ords(x, fmt: FloatFormat):
    if isinstance(x, np.ndarray):
        if fmt.width == 32:
            bits = np.ascontiguousarray(x, dtype=np.float32).view(np.int32).astype(np.int64)
            return np.where(bits < 0, np.int64(-0x80000000) - bits - 1, bits)
        bits = np.ascontiguousarray(x, dtype=np.float64).view(np.int64)
        return np.where(bits < 0, np.int64(-0x8000000000000000) - bits - 1, bits)
    return fmt.ordinal(float(x))


def _from_ords(o, fmt: FloatFormat):
    if isinstance(o, np.ndarray):
        neg = o < 0
        if fmt.width == 32:
            bits = np.where(neg, np.int64(-0x80000000) - o - 1, o).astype(np.int32)
            return bits.view(np.float32)
        bits = np.where(neg, np.int64(-0x8000000000000000) - o - 1, o)
        return bits.view(np.float64)
    return fmt.from_ordinal(int(o))


class OrdinalAffine:
    """f with value ordinal v0 + slope * (ordinal(x) - o0); isotonic for
    slope >= 1, total on any range where the result ordinal stays finite."""

    def __init__(self, fmt: FloatFormat = BINARY64, slope: int = 1,
                 v0: Optional[int] = None, o0: Optional[int] = None):
        if slope < 1:
            raise DomainError("slope must be >= 1")
        self.fmt = fmt
        self.slope = slope
        self.o0 = fmt.ordinal(1.0) if o0 is None else o0
        self.v0 = fmt.ordinal(1.0) if v0 is None else v0

    def value_ordinal(self, o):
        return self.v0 + self.slope * (o - self.o0)

    def __call__(self, x):
        return _from_ords(self.value_ordinal(_to_ords(x, self.fmt)), self.fmt)

    def rough_inverse(self):
        def inv(y: float) -> float:
            o = self.o0 + (self.fmt.ordinal(y) - self.v0) // self.slope
            o = max(-self.fmt.ordinal(self.fmt.max_finite), min(o, self.fmt.ordinal(self.fmt.max_finite)))
            return self.fmt.from_ordinal(o)
        return inv


class TabulatedFunction:
    """f backed by an explicit table of value ordinals over one x-range.

    Probing outside the table raises, which doubles as an instrument:
    the refinement engine never looks outside the interval it was given.
    """

    def __init__(self, fmt: FloatFormat, o_lo: int, values: np.ndarray):
        self.fmt = fmt
        self.o_lo = o_lo
        self.values = np.asarray(values, dtype=np.int64)

    @property
    def domain(self) -> FloatInterval:
        return FloatInterval(self.fmt.from_ordinal(self.o_lo),
                             self.fmt.from_ordinal(self.o_lo + len(self.values) - 1),
                             self.fmt)

    def __call__(self, x):
        idx = _to_ords(x, self.fmt) - self.o_lo
        if isinstance(idx, np.ndarray):
            if (idx < 0).any() or (idx >= len(self.values)).any():
                raise DomainError("tabulated function probed outside its table")
        elif not 0 <= idx < len(self.values):
            raise DomainError("tabulated function probed outside its table")
        return _from_ords(self.values[idx], self.fmt)

    def rough_inverse(self):
        v_lo, v_hi = int(self.values[0]), int(self.values[-1])
        span = max(1, abs(v_hi - v_lo))
        n = len(self.values)

        def inv(y: float) -> float:
            t = (self.fmt.ordinal(y) - v_lo) * (n - 1) // span
            t = max(0, min(n - 1, t))
            return self.fmt.from_ordinal(self.o_lo + t)
        return inv


class DippedIdentity:
    """Identity on ordinals except for explicit dips; total on all finite
    floats, so usable as a CLI-bound function.

    Each dip is (start_ordinal, width, depth): on the window the value
    drops below the left shoulder's by 1..depth steps in a V shape.
    """

    def __init__(self, fmt: FloatFormat = BINARY64, dips=()):
        self.fmt = fmt
        self.dips = tuple(dips)
        for start, width, depth in self.dips:
            if width < 1 or depth < 1:
                raise DomainError("dip width and depth must be positive")

    def _dip_values(self, start: int, width: int, depth: int) -> np.ndarray:
        shoulder = start - 1  # identity: value ordinal equals x ordinal
        j = np.arange(width, dtype=np.int64)
        mid = (width - 1) // 2
        drop = np.maximum(1, depth - np.abs(j - mid))
        return shoulder - drop

    def __call__(self, x):
        o = _to_ords(x, self.fmt)
        if isinstance(o, np.ndarray):
            v = o.copy()
            for start, width, depth in self.dips:
                m = (o >= start) & (o < start + width)
                if m.any():
                    v[m] = self._dip_values(start, width, depth)[o[m] - start]
            return _from_ords(v, self.fmt)
        for start, width, depth in self.dips:
            if start <= o < start + width:
                return _from_ords(int(self._dip_values(start, width, depth)[o - start]),
                                  self.fmt)
        return _from_ords(o, self.fmt)

    def rough_inverse(self):
        fmt = self.fmt

        def inv(y: float) -> float:
            return y
        return inv


# ---------------------------------------------------------------------------
# table builders and ground truth
# ---------------------------------------------------------------------------

def monotone_values(n: int, rng: np.random.Generator, kind: str = "slope1",
                    v0: Optional[int] = None) -> np.ndarray:
    """A nondecreasing value-ordinal table of length n."""
    if v0 is None:
        v0 = BINARY64.ordinal(1.0)
    if kind == "slope1":
        steps = np.ones(n, dtype=np.int64)
    elif kind == "affine":
        steps = np.full(n, int(rng.integers(1, 5)), dtype=np.int64)
    elif kind == "staircase":
        steps = rng.integers(0, 3, size=n).astype(np.int64)
    elif kind == "jumpy":
        steps = rng.integers(1, 4, size=n).astype(np.int64)
        big = rng.random(n) < 0.01
        steps[big] += rng.integers(10, 1000, size=int(big.sum()))
    else:
        raise DomainError(f"unknown base kind {kind!r}")
    steps[0] = 0
    return v0 + np.cumsum(steps)


def inject_dip(values: np.ndarray, start: int, width: int, depth: int,
               rng: Optional[np.random.Generator] = None) -> None:
    """Overwrite values[start:start+width] with a run strictly below the
    running maximum, dropping exactly `depth` steps at its lowest."""
    if not (1 <= start and start + width <= len(values)):
        raise DomainError("dip window must leave the first point intact")
    if width < 1 or depth < 1:
        raise DomainError("dip width and depth must be positive")
    shoulder = int(values[:start].max())
    j = np.arange(width, dtype=np.int64)
    mid = (width - 1) // 2 if rng is None else int(rng.integers(0, width))
    drop = np.maximum(1, depth - np.abs(j - mid))
    drop[mid] = depth
    values[start:start + width] = shoulder - drop


def dip_records_of(values: np.ndarray) -> list[tuple[int, int, int, int, int]]:
    """Maximal runs below the running maximum, by definition:
    (start_idx, end_idx, width, depth, ref_max_ordinal)."""
    v = np.asarray(values, dtype=np.int64)
    rm = np.maximum.accumulate(v)
    mask = v < rm
    out = []
    i = 0
    n = len(v)
    while i < n:
        if mask[i]:
            j = i
            while j + 1 < n and mask[j + 1]:
                j += 1
            ref = int(rm[i])
            out.append((i, j, j - i + 1, ref - int(v[i:j + 1].min()), ref))
            i = j + 1
        else:
            i += 1
    return out


def hull_summary_of(values: np.ndarray):
    """(n_runs, d_max, w_max, first_idx, last_idx) of the anomalous set
    {i : v[i] < runmax(i) or v[i] > runmin_from_right(i)}; None if empty."""
    v = np.asarray(values, dtype=np.int64)
    rm = np.maximum.accumulate(v)
    rmin = np.minimum.accumulate(v[::-1])[::-1]
    anom = (v < rm) | (v > rmin)
    if not anom.any():
        return None
    idx = np.flatnonzero(anom)
    splits = np.flatnonzero(np.diff(idx) > 1)
    n_runs = len(splits) + 1
    run_bounds = np.split(idx, splits + 1)
    w_max = max(int(r[-1] - r[0] + 1) for r in run_bounds)
    d_max = int((rm - v).max())
    return n_runs, d_max, w_max, int(idx[0]), int(idx[-1])


def exact_bounds(table: TabulatedFunction) -> GlitchBounds:
    """Tight GlitchBounds for a tabulated function (hull semantics)."""
    info = hull_summary_of(table.values)
    if info is None:
        return NO_GLITCHES
    n_runs, d_max, w_max, first, last = info
    fmt = table.fmt
    return GlitchBounds(n_runs, d_max, w_max,
                        fmt.from_ordinal(table.o_lo + first - 1),
                        fmt.from_ordinal(table.o_lo + last + 1))


class PeriodicModel:
    """Glitch-free model with exact branch behavior on any domain size.

    Within the branch ending at k*pi/2 the value ordinal is an exact
    ramp over the branch-local float index (rising on isotonic branches,
    falling on antitonic ones, always rising for the discontinuous
    class). Branches are not stitched together continuously, which no
    per-branch contract requires; what matters is that monotonicity is
    exact within every branch at the float level.
    """

    def __init__(self, fmt: FloatFormat, pclass, cfg=None):
        from .reduction import ReductionConfig
        self.fmt = fmt
        self.pclass = pclass
        self.cfg = cfg if cfg is not None else ReductionConfig.for_format(fmt)
        self._base = fmt.ordinal(1.0)
        self._branches: dict[int, tuple[int, int, bool]] = {}

    def _branch(self, k: int) -> tuple[int, int, bool]:
        cached = self._branches.get(k)
        if cached is None:
            from .reduction import pio2_mult_down, pio2_mult_up, quasi_isotonic
            o_start = self.fmt.ordinal(pio2_mult_up(k - 2, self.cfg))
            o_end = self.fmt.ordinal(pio2_mult_down(k, self.cfg))
            cached = (o_start, o_end, quasi_isotonic(k, self.pclass))
            self._branches[k] = cached
        return cached

    def _value_ordinal(self, x: float) -> int:
        from .reduction import div_pio2_up, geq_tonicity_change
        k = geq_tonicity_change(self.pclass, div_pio2_up(x, self.cfg))
        o_start, o_end, iso = self._branch(k)
        o = self.fmt.ordinal(x)
        return self._base + (o - o_start if iso else o_end - o)

    def __call__(self, x):
        if isinstance(x, np.ndarray):
            flat = [self._value_ordinal(float(v)) for v in x.ravel()]
            out = np.array(flat, dtype=np.int64).reshape(x.shape)
            return _from_ords(out, self.fmt)
        return _from_ords(self._value_ordinal(float(x)), self.fmt)

    def rough_inverse(self):
        def inv(y: float) -> float:
            return math.nan
        return inv


# ---------------------------------------------------------------------------
# trig models
# ---------------------------------------------------------------------------

def trig_model(iv: FloatInterval, pclass, cfg=None, dips_per_branch: int = 0,
               rng: Optional[np.random.Generator] = None,
               dip_width: int = 5, dip_depth: int = 3) -> TabulatedFunction:
    """A tabulated model with exact branch behavior for the period class.

    Rising/falling ramps meet at the float-level branch boundaries of
    the class (equal peak values on both sides, like cos at 0); the
    discontinuous class restarts every branch at the base level. With
    dips_per_branch > 0 every branch gets that many interior anomalies.
    """
    from .glitches import quasi_monotone_split

    if iv.count > (1 << 22):
        raise ContractError("trig model tables limited to 2**22 floats")
    fmt = iv.fmt
    pieces = quasi_monotone_split(pclass, iv, cfg)
    values = np.empty(iv.count, dtype=np.int64)
    base = fmt.ordinal(1.0)
    cur = base
    pos = 0
    from .reduction import PeriodClass
    for piece, cls in pieces:
        n = piece.count
        if pclass is PeriodClass.ODD_C:
            seg = np.arange(base, base + n, dtype=np.int64)
        elif cls is MonotoneClass.ISOTONIC:
            seg = np.arange(cur, cur + n, dtype=np.int64)
            cur = cur + n - 1
        else:
            seg = np.arange(cur, cur - n, -1, dtype=np.int64)
            cur = cur - n + 1
        if dips_per_branch and n >= 2 * (dip_width + 4):
            r = rng if rng is not None else np.random.default_rng(0)
            sgn = 1 if (pclass is PeriodClass.ODD_C or cls is MonotoneClass.ISOTONIC) else -1
            work = seg if sgn == 1 else -seg
            for _ in range(dips_per_branch):
                start = int(r.integers(2, n - dip_width - 2))
                inject_dip(work, start, dip_width, dip_depth, r)
            seg = work if sgn == 1 else -work
        values[pos:pos + n] = seg
        pos += n
    return TabulatedFunction(fmt, fmt.ordinal(iv.lo), values)
