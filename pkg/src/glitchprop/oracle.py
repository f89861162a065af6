"""Independent ground truth for tests and acceptance checks.

Everything here is deliberately self-contained: the exhaustive scans
use their own ordinal arithmetic (numpy bit views, plus a pure-Python
struct-based twin for self-consistency checks), and the high-precision
constants are a separate committed copy, cross-checked in the test
suite against an integer-only Machin computation. None of the search
or range-reduction code is imported.
"""

from __future__ import annotations

import math
import struct
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .errors import ContractError, DomainError
from .formats import FloatFormat, FloatInterval

__all__ = ["BruteForceAnswer", "brute_refine", "check_predicate", "hp_const"]

_MAX_SCAN = 1 << 20

# committed 256-bit mantissas (independent copy; see tests for the
# spigot cross-check)
_HP_CONSTANTS = {
    "pi_over_2": (
        0xC90FDAA22168C234C4C6628B80DC1CD129024E088A67CC74020BBEA63B139B22,
        -255),
    "two_over_pi": (
        0xA2F9836E4E441529FC2757D1F534DDC0DB6295993C439041FE5163ABDEBBC562,
        -256),
}


def hp_const(name: str, bits: int) -> tuple[int, int]:
    """(mantissa, exponent) of the named constant rounded to `bits` bits."""
    if name not in _HP_CONSTANTS:
        raise DomainError(f"unknown constant {name!r}")
    if not 1 <= bits <= 256:
        raise DomainError("bits must be in [1, 256]")
    m, e = _HP_CONSTANTS[name]
    drop = 256 - bits
    if drop == 0:
        return m, e
    head, tail = m >> drop, m & ((1 << drop) - 1)
    half = 1 << (drop - 1)
    if tail > half or (tail == half and head & 1):
        head += 1
        if head == 1 << bits:
            head >>= 1
            e += 1
    return head, e + drop


# ---------------------------------------------------------------------------
# self-contained ordinal arithmetic
# ---------------------------------------------------------------------------

def _o32(x: float) -> int:
    b = struct.unpack("<i", struct.pack("<f", x))[0]
    return b if b >= 0 else (-0x80000000 - b) - 1


def _o64(x: float) -> int:
    b = struct.unpack("<q", struct.pack("<d", x))[0]
    return b if b >= 0 else (-0x8000000000000000 - b) - 1


def _ord_of(x: float, fmt: FloatFormat) -> int:
    if math.isnan(x):
        raise DomainError("NaN has no ordinal")
    return _o32(x) if fmt.width == 32 else _o64(x)


def _float_of(o: int, fmt: FloatFormat) -> float:
    if fmt.width == 32:
        b = o if o >= 0 else -0x80000000 - (o + 1)
        return float(struct.unpack("<f", struct.pack("<i", b))[0])
    b = o if o >= 0 else -0x8000000000000000 - (o + 1)
    return struct.unpack("<d", struct.pack("<q", b))[0]


def _range_floats(o_lo: int, o_hi: int, fmt: FloatFormat) -> np.ndarray:
    o = np.arange(o_lo, o_hi + 1, dtype=np.int64)
    neg = o < 0
    if fmt.width == 32:
        bits = np.where(neg, np.int64(-0x80000000) - o - 1, o).astype(np.int32)
        return bits.view(np.float32)
    bits = np.where(neg, np.int64(-0x8000000000000000) - o - 1, o)
    return bits.view(np.float64)


def _values_to_ords(vals: np.ndarray, fmt: FloatFormat) -> np.ndarray:
    if fmt.width == 32:
        arr = np.ascontiguousarray(vals, dtype=np.float32)
        if np.isnan(arr).any():
            raise DomainError("oracle scan hit a NaN output")
        bits = arr.view(np.int32).astype(np.int64)
        sign_swap = np.int64(-0x80000000)
    else:
        arr = np.ascontiguousarray(vals, dtype=np.float64)
        if np.isnan(arr).any():
            raise DomainError("oracle scan hit a NaN output")
        bits = arr.view(np.int64)
        sign_swap = np.int64(-0x8000000000000000)
    return np.where(bits < 0, sign_swap - bits - 1, bits)


def _eval_range(f, o_lo: int, o_hi: int, fmt: FloatFormat) -> np.ndarray:
    """Value ordinals of f over the ordinal range [o_lo, o_hi]."""
    xs = _range_floats(o_lo, o_hi, fmt)
    try:
        out = np.asarray(f(xs))
        if out.shape != xs.shape:
            raise ValueError
    except (TypeError, ValueError):
        out = np.array([f(float(x)) for x in xs], dtype=np.float64)
    return _values_to_ords(out, fmt)


@dataclass(frozen=True)
class BruteForceAnswer:
    leftmost_sol: Optional[float]
    rightmost_sol: Optional[float]
    below_all: bool
    above_all: bool
    min_f: float
    max_f: float


def brute_refine(f, y: float, iv: FloatInterval) -> BruteForceAnswer:
    """Exhaustive scan of f over iv: exact extremal solutions of f(x) = y
    (equality in the total order) and exact min/max of f."""
    fmt = iv.fmt
    o_lo, o_hi = _ord_of(iv.lo, fmt), _ord_of(iv.hi, fmt)
    if o_hi - o_lo + 1 > _MAX_SCAN:
        raise ContractError(f"brute_refine limited to {_MAX_SCAN} floats")
    v = _eval_range(f, o_lo, o_hi, fmt)
    y_o = _ord_of(y, fmt)
    sols = np.flatnonzero(v == y_o)
    left = _float_of(o_lo + int(sols[0]), fmt) if len(sols) else None
    right = _float_of(o_lo + int(sols[-1]), fmt) if len(sols) else None
    return BruteForceAnswer(
        leftmost_sol=left,
        rightmost_sol=right,
        below_all=bool((v < y_o).all()),
        above_all=bool((v > y_o).all()),
        min_f=_float_of(int(v.min()), fmt),
        max_f=_float_of(int(v.max()), fmt),
    )


def _brute_refine_py(f, y: float, iv: FloatInterval) -> BruteForceAnswer:
    """Pure-Python twin of brute_refine (independent code path)."""
    fmt = iv.fmt
    o_lo, o_hi = _ord_of(iv.lo, fmt), _ord_of(iv.hi, fmt)
    if o_hi - o_lo + 1 > _MAX_SCAN:
        raise ContractError(f"brute_refine limited to {_MAX_SCAN} floats")
    y_o = _ord_of(y, fmt)
    left = right = None
    below = above = True
    min_o = max_o = None
    for o in range(o_lo, o_hi + 1):
        vo = _ord_of(float(f(_float_of(o, fmt))), fmt)
        if vo == y_o:
            right = o
            if left is None:
                left = o
        if vo >= y_o:
            below = False
        if vo <= y_o:
            above = False
        min_o = vo if min_o is None else min(min_o, vo)
        max_o = vo if max_o is None else max(max_o, vo)
    return BruteForceAnswer(
        leftmost_sol=None if left is None else _float_of(left, fmt),
        rightmost_sol=None if right is None else _float_of(right, fmt),
        below_all=below, above_all=above,
        min_f=_float_of(min_o, fmt), max_f=_float_of(max_o, fmt),
    )


def check_predicate(r: int, y: float, iv: FloatInterval, value: Optional[float],
                    f) -> bool:
    """Literal evaluation of the postcondition predicate p_r.

    The quantified parts are checked by exhaustive scan (interval capped
    at 2**20 floats); value may be None for the no-solution codes 0/5.
    """
    fmt = iv.fmt
    o_lo, o_hi = _ord_of(iv.lo, fmt), _ord_of(iv.hi, fmt)
    if o_hi - o_lo + 1 > _MAX_SCAN:
        raise ContractError(f"check_predicate limited to {_MAX_SCAN} floats")
    y_o = _ord_of(y, fmt)

    def all_above(a: int, b: int) -> bool:
        return a > b or bool((_eval_range(f, a, b, fmt) > y_o).all())

    def all_below(a: int, b: int) -> bool:
        return a > b or bool((_eval_range(f, a, b, fmt) < y_o).all())

    def f_ord_at(o: int) -> int:
        return _ord_of(float(f(_float_of(o, fmt))), fmt)

    if r in (0, 5):
        return all_below(o_lo, o_hi) if r == 0 else all_above(o_lo, o_hi)
    if value is None:
        raise DomainError(f"status {r} carries a value")
    v_o = _ord_of(value, fmt)
    if not o_lo <= v_o <= o_hi:
        return False
    if r == 6:
        return all_below(v_o, o_hi)
    if r == 7:
        return all_above(v_o, o_hi)
    if r == 8:
        return f_ord_at(v_o - 1) < y_o and all_above(v_o, o_hi)
    if r == 9:
        return f_ord_at(v_o) == y_o and all_above(v_o + 1, o_hi)
    if r == 1:
        return all_above(o_lo, v_o)
    if r == 2:
        return all_below(o_lo, v_o)
    if r == 3:
        return f_ord_at(v_o + 1) > y_o and all_below(o_lo, v_o)
    if r == 4:
        return f_ord_at(v_o) == y_o and all_below(o_lo, v_o - 1)
    raise DomainError(f"unknown status code {r}")
