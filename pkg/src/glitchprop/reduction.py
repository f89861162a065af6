"""Range-reduction arithmetic for the trigonometric refinement code.

Provides the integer division by pi/2 rounded upwards, correctly
bracketed floating-point neighbors of the multiples k*pi/2, the working
precision requirements behind both, the rounding-error bound for
multiplying an exact float by a rounded constant, a worst-case argument
search, and small double-double building blocks.

The committed 256-bit mantissas of pi/2 and 2/pi make directed results
cheap to prove: a float c compares against k*pi/2 by comparing integers
(c and k*M share a power-of-two grid), and the 2**-203 slack left by
the 256-bit table is orders of magnitude below the closest any float in
the supported range comes to a multiple of pi/2. Rounding mode is never
switched; directed results are obtained by adjusting a nearest-rounded
candidate, and binary32 products are carried out in binary64 as usual.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

import numpy as np

from ._constants import (PI_OVER_2_EXP, PI_OVER_2_LIMBS, PI_OVER_2_MANT,
                         TWO_OVER_PI_EXP, TWO_OVER_PI_LIMBS, TWO_OVER_PI_MANT)
from .errors import ContractError, DomainError, RangeError
from .formats import BINARY32, BINARY64, FloatFormat, FloatInterval

__all__ = [
    "PeriodClass",
    "ReductionConfig",
    "DoubleDouble",
    "geq_tonicity_change",
    "quasi_isotonic",
    "div_pio2_up",
    "pio2_mult_down",
    "pio2_mult_up",
    "required_precision",
    "fp_mult_error_bound",
    "worst_case_search",
    "two_sum",
    "two_prod",
    "dd_mul",
    "dd_round_down",
    "dd_round_up",
]


class PeriodClass(enum.Enum):
    """How a periodic function behaves at multiples of pi/2.

    EVEN_V: tonicity changes at even multiples (cosine).
    ODD_V: tonicity changes at odd multiples (sine).
    ODD_C: discontinuity at odd multiples, isotonic throughout (tangent).
    """

    EVEN_V = "even_v"
    ODD_V = "odd_v"
    ODD_C = "odd_c"


def geq_tonicity_change(p: PeriodClass, k0: int) -> int:
    """Smallest k >= k0 whose multiple of pi/2 is a tonicity change for p."""
    want_odd = p is not PeriodClass.EVEN_V
    return k0 if k0 % 2 == want_odd else k0 + 1


def quasi_isotonic(k: int, p: PeriodClass) -> bool:
    """Is the branch ending at k*pi/2 rising? Decided by k mod 4."""
    if p is PeriodClass.ODD_C:
        return True
    m = k % 4
    if p is PeriodClass.EVEN_V:
        return m in (0, 3)
    return m in (1, 2)


# ---------------------------------------------------------------------------
# error-free transforms and double-double helpers (no FMA on this platform,
# so products split Dekker-style with the 2**27 + 1 constant)
# ---------------------------------------------------------------------------

_SPLITTER = 134217729.0  # 2**27 + 1


def two_sum(a: float, b: float) -> tuple[float, float]:
    s = a + b
    bb = s - a
    return s, (a - (s - bb)) + (b - bb)


def _fast_two_sum(a: float, b: float) -> tuple[float, float]:
    # requires |a| >= |b|
    s = a + b
    return s, b - (s - a)


def _veltkamp_split(a: float) -> tuple[float, float]:
    c = _SPLITTER * a
    hi = c - (c - a)
    return hi, a - hi


def two_prod(a: float, b: float) -> tuple[float, float]:
    p = a * b
    ah, al = _veltkamp_split(a)
    bh, bl = _veltkamp_split(b)
    err = ((ah * bh - p) + ah * bl + al * bh) + al * bl
    return p, err


class DoubleDouble(NamedTuple):
    """Unevaluated sum hi + lo with |lo| <= ulp(hi)/2."""

    hi: float
    lo: float

    @staticmethod
    def from_sum(a: float, b: float) -> "DoubleDouble":
        return DoubleDouble(*two_sum(a, b))


PI_OVER_2_DD = DoubleDouble(PI_OVER_2_LIMBS[0], PI_OVER_2_LIMBS[1])
TWO_OVER_PI_DD = DoubleDouble(TWO_OVER_PI_LIMBS[0], TWO_OVER_PI_LIMBS[1])


def dd_mul(k: float, c: DoubleDouble) -> DoubleDouble:
    """Multiply an exactly representable k by a double-double."""
    k = float(k)
    p1, e1 = two_prod(k, c.hi)
    p2, e2 = two_prod(k, c.lo)
    t, e3 = two_sum(e1, p2)
    hi, r = _fast_two_sum(p1, t)
    return DoubleDouble(*_fast_two_sum(hi, r + (e3 + e2)))


def dd_round_down(dd: DoubleDouble, target: FloatFormat) -> float:
    return _dd_round(dd, target)[0]


def dd_round_up(dd: DoubleDouble, target: FloatFormat) -> float:
    return _dd_round(dd, target)[1]


def _dd_round(dd: DoubleDouble, target: FloatFormat) -> tuple[float, float]:
    """Largest target float <= hi+lo and smallest >= it, by lo-sign inspection."""
    if target.width == 64:
        if dd.lo > 0.0:
            return dd.hi, target.succ(dd.hi)
        if dd.lo < 0.0:
            return target.pred(dd.hi), dd.hi
        return dd.hi, dd.hi
    c = target.coerce(dd.hi)
    if math.isinf(c):
        raise RangeError("double-double exceeds binary32 range")
    d = c - dd.hi  # exact: c within half a binary32 ulp of hi
    s, e = two_sum(d, -dd.lo)  # sign of c - (hi + lo)
    if s > 0.0 or (s == 0.0 and e > 0.0):
        return target.pred(c), c
    if s < 0.0 or (s == 0.0 and e < 0.0):
        return c, target.succ(c)
    return c, c


# ---------------------------------------------------------------------------
# configuration and the exact-comparison core
# ---------------------------------------------------------------------------

def _default_l_max(fmt: FloatFormat) -> float:
    # the binade where the ulp reaches 1: every k = ceil(x*2/pi) in range is
    # exactly representable in the target format
    return math.ldexp(1.0, fmt.precision_bits)


@dataclass(frozen=True)
class ReductionConfig:
    target: FloatFormat
    l_max: float = 0.0           # 0 selects the per-format default
    working_precision: int = 256

    def __post_init__(self):
        if self.l_max == 0.0:
            object.__setattr__(self, "l_max", _default_l_max(self.target))
        if not (0.0 < self.l_max <= _default_l_max(self.target)):
            raise DomainError("l_max must be in (0, 2**precision]")
        need = required_precision(self.target, "multiply_pi_over_2")
        if self.working_precision < need:
            raise DomainError(
                f"working_precision {self.working_precision} below required {need}")

    @staticmethod
    def for_format(fmt: FloatFormat) -> "ReductionConfig":
        return ReductionConfig(target=fmt)

    @property
    def k_max(self) -> int:
        return _ceil_x_two_over_pi_exact(self.l_max)


def _float_as_int_scaled(x: float) -> tuple[int, int]:
    """Exact (m, e) with x = m * 2**e and m an integer."""
    m, exp = math.frexp(x)
    return int(math.ldexp(m, 53)), exp - 53


def _ceil_x_two_over_pi_exact(x: float) -> int:
    """ceil(x * 2/pi) through the 256-bit table; exact for |x| <= 2**53."""
    mx, ex = _float_as_int_scaled(x)
    n = mx * TWO_OVER_PI_MANT
    shift = -(ex + TWO_OVER_PI_EXP)
    assert shift > 0
    return -((-n) >> shift)


def _cmp_float_vs_pio2_mult(c: float, k: int) -> int:
    """Sign of c - k*pi/2, computed on integers; never 0 for k != 0."""
    mc, ec = _float_as_int_scaled(c)
    rhs = k * PI_OVER_2_MANT
    d = ec - PI_OVER_2_EXP
    lhs = mc << d if d >= 0 else mc
    if d < 0:
        rhs <<= -d
    if lhs == rhs:
        # cannot happen: k*pi/2 is irrational and the 256-bit table leaves
        # only 2**-203 of slack, far below any float's distance to it
        raise AssertionError("float coincided with pi/2 multiple table value")
    return 1 if lhs > rhs else -1


def div_pio2_up(x: float, cfg: ReductionConfig) -> int:
    """k = ceil(x * 2/pi), so that (k-1)*pi/2 <= x <= k*pi/2.

    The signed zeros are special: -0.0 -> 0 and +0.0 -> 1, matching the
    signed-zero convention of the quasi-monotonic interval split.
    """
    x = cfg.target.check_value(x, "x")
    if x == 0.0:
        return 0 if math.copysign(1.0, x) < 0 else 1
    if abs(x) > cfg.l_max:
        raise RangeError(f"|x| exceeds l_max {cfg.l_max!r}")
    if cfg.target.width == 32:
        # binary64 carries 53 bits, above the required 52 for binary32
        return math.ceil(x * TWO_OVER_PI_LIMBS[0])
    return _ceil_x_two_over_pi_exact(x)


def _pio2_bracket(k: int, cfg: ReductionConfig) -> tuple[float, float]:
    if k == 0:
        return -0.0, 0.0
    if abs(k) > cfg.k_max:
        raise RangeError(f"|k| exceeds the l_max region (k_max {cfg.k_max})")
    fmt = cfg.target
    # nearest-rounded candidate, then exact adjustment by a step or two
    c = fmt.coerce(float(k) * PI_OVER_2_LIMBS[0])
    while _cmp_float_vs_pio2_mult(c, k) >= 0:
        c = fmt.pred(c)
    up = fmt.succ(c)
    while _cmp_float_vs_pio2_mult(up, k) < 0:
        c = up
        up = fmt.succ(c)
    return c, up


def pio2_mult_down(k: int, cfg: ReductionConfig) -> float:
    """Largest target float strictly below k*pi/2; -0.0 for k = 0."""
    return _pio2_bracket(k, cfg)[0]


def pio2_mult_up(k: int, cfg: ReductionConfig) -> float:
    """Smallest target float strictly above k*pi/2; +0.0 for k = 0."""
    return _pio2_bracket(k, cfg)[1]


# ---------------------------------------------------------------------------
# precision requirements
# ---------------------------------------------------------------------------

# worst observed e_x - e_dx over [-l_max, l_max]: binary32 from the exhaustive
# search (21 - (-27)); binary64 from the published double-precision analysis
_WORST_EXPONENT_GAP = {"binary32": 48, "binary64": 106}

_OP_CONST_EXPONENT = {"divide_2_over_pi": -1, "multiply_pi_over_2": 0}


def required_precision(target: FloatFormat, op: str) -> int:
    """Minimal working precision for the named reduction operation."""
    try:
        gap = _WORST_EXPONENT_GAP[target.name]
    except KeyError:
        raise DomainError(f"unsupported target format {target.name}") from None
    try:
        e_const = _OP_CONST_EXPONENT[op]
    except KeyError:
        raise DomainError(f"unknown operation {op!r}") from None
    # p must exceed e_x - e_dx + e_const + 4
    return gap + e_const + 4 + 1


def fp_mult_error_bound(e_k: int, e_x: int, p: int) -> float:
    """Bound 2**(e_k + e_x - p + 4) on |fl(k * x_hat) - k*x|."""
    s = e_k + e_x - p + 4
    if not -1074 <= s <= 1023:
        raise RangeError(f"bound exponent {s} outside binary64")
    return math.ldexp(1.0, s)


# ---------------------------------------------------------------------------
# worst-case argument search
# ---------------------------------------------------------------------------

def _exact_quadrant_delta(x: float) -> tuple[int, int, int]:
    """(k_hat, remainder, shift): x*2/pi = k_hat + remainder/2**shift, exact
    against the 256-bit table, with k_hat the nearest integer."""
    mx, ex = _float_as_int_scaled(x)
    n = mx * TWO_OVER_PI_MANT
    shift = -(ex + TWO_OVER_PI_EXP)
    assert shift > 0
    k_hat = (n + (1 << (shift - 1))) >> shift
    return k_hat, n - (k_hat << shift), shift


def _delta_as_float(rem: int, shift: int) -> float:
    return math.ldexp(float(rem), -shift)


def _abs_delta_leq(rem: int, shift: int, threshold: float) -> bool:
    mt, et = _float_as_int_scaled(threshold)
    # |rem| / 2**shift <= mt * 2**et
    lhs, rhs = abs(rem), mt
    d = et + shift
    if d >= 0:
        rhs <<= d
    else:
        lhs <<= -d
    return lhs <= rhs


def worst_case_search(target: FloatFormat, domain: FloatInterval,
                      threshold: float) -> list[tuple[float, float]]:
    """All x in the domain with |x*2/pi - nearest integer| <= threshold.

    Only arguments whose nearest quadrant index is at least 1 take part
    (below pi/4 the distance to 0 is trivially small). The search runs
    over magnitudes; when only -x lies in the domain the negated
    argument is reported. Results are sorted worst-first by the
    cancellation severity e_x - e_dx (the exponent gap the working
    precision must absorb), so the argument that pins the precision
    requirement comes first. binary32 domains are scanned one exponent
    block at a time with a vectorized prefilter; binary64 domains are
    limited to 2**21 floats and checked exactly point by point.
    """
    if threshold <= 0.0 or math.isnan(threshold):
        raise DomainError("threshold must be positive")
    if domain.fmt is not target:
        raise DomainError("domain format must match the search target")
    cfg = ReductionConfig.for_format(target)
    if abs(domain.lo) > cfg.l_max or abs(domain.hi) > cfg.l_max:
        raise RangeError("domain exceeds l_max")

    # magnitude hull of the domain
    if domain.lo >= 0.0:
        mag_lo, mag_hi = abs(domain.lo), domain.hi
    elif domain.hi <= 0.0:
        mag_lo, mag_hi = abs(domain.hi), abs(domain.lo)
    else:
        mag_lo, mag_hi = 0.0, max(abs(domain.lo), domain.hi)
    quarter_pi = pio2_mult_down(1, cfg) / 2.0
    mag_lo = max(mag_lo, quarter_pi)
    if mag_hi < mag_lo:
        return []

    if target.width == 32:
        cands = _search_binary32(mag_lo, mag_hi, threshold)
    else:
        if target.count(mag_lo, mag_hi) > 1 << 21:
            raise RangeError("binary64 worst-case search limited to 2**21 floats")
        cands = _search_exact(target, mag_lo, mag_hi, threshold)

    out = []
    for x, rem, shift in cands:
        if not domain.contains(x):
            x = -x
            rem = -rem
            if not domain.contains(x):
                continue
        # the severity of a candidate is how many bits cancel relative
        # to x: e_x - e_dx, the quantity the precision requirement is
        # built from; the worst case (largest gap) sorts first
        gap = target.exponent(x) - (abs(rem).bit_length() - 1 - shift)
        out.append((x, _delta_as_float(rem, shift), gap,
                    Fraction(abs(rem), 1 << shift)))
    out.sort(key=lambda t: (-t[2], t[3], t[0]))
    return [(x, d) for x, d, _, _ in out]


def _search_exact(fmt, mag_lo, mag_hi, threshold):
    hits = []
    o = fmt.ordinal(mag_lo)
    end = fmt.ordinal(mag_hi)
    while o <= end:
        x = fmt.from_ordinal(o)
        k_hat, rem, shift = _exact_quadrant_delta(x)
        if k_hat >= 1 and _abs_delta_leq(rem, shift, threshold):
            hits.append((x, rem, shift))
        o += 1
    return hits


def _search_binary32(mag_lo, mag_hi, threshold):
    c1, c2 = TWO_OVER_PI_LIMBS[0], TWO_OVER_PI_LIMBS[1]
    e_lo = max(-1, BINARY32.exponent(mag_lo))
    e_hi = BINARY32.exponent(mag_hi)
    # vectorized prefilter errs below 2**-48; verify candidates exactly
    slack = math.ldexp(1.0, -45)
    hits = []
    for e in range(e_lo, e_hi + 1):
        m0, m1 = 1 << 23, 1 << 24
        scale = math.ldexp(1.0, e - 23)
        # restrict the block to the magnitude range
        if math.ldexp(float(m1 - 1), e - 23) < mag_lo or math.ldexp(float(m0), e - 23) > mag_hi:
            continue
        m_start = max(m0, int(math.floor(mag_lo / scale)))
        m_stop = min(m1 - 1, int(math.ceil(mag_hi / scale)))
        a1 = math.ldexp(c1, e - 23)
        a2 = math.ldexp(c2, e - 23)
        a1h, a1l = _veltkamp_split(a1)
        for c_start in range(m_start, m_stop + 1, 1 << 21):
            c_stop = min(c_start + (1 << 21) - 1, m_stop)
            m = np.arange(c_start, c_stop + 1, dtype=np.int64).astype(np.float64)
            t1 = m * a1h  # exact: 24-bit m times 27-bit half
            t2 = m * a1l
            r = (t1 - np.rint(t1)) + (t2 - np.rint(t2)) + m * a2
            delta = r - np.rint(r)
            mask = np.abs(delta) <= threshold + slack
            for mi in np.flatnonzero(mask):
                x = math.ldexp(float(m[mi]), e - 23)
                if not (mag_lo <= x <= mag_hi):
                    continue
                k_hat, rem, shift = _exact_quadrant_delta(x)
                if k_hat >= 1 and _abs_delta_leq(rem, shift, threshold):
                    hits.append((x, rem, shift))
    return hits
