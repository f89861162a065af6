"""Bit-exact utilities over the totally ordered machine floats.

Floats of a format are totally ordered by mapping their IEEE 754 bit
patterns to signed ordinals (sign-magnitude folded two's-complement
style). -0.0 and +0.0 are distinct, adjacent points of the order:
ordinal(-0.0) = -1, ordinal(+0.0) = 0. Infinities sit one ordinal past
the largest finite float of either sign, so they compare correctly as
function outputs, but they are rejected as interval endpoints. NaN is
rejected everywhere.

All values are carried as Python floats; binary32 values are Python
floats that are exactly representable in binary32, which every
operation checks on entry.
"""

from __future__ import annotations

import math
import struct
from dataclasses import dataclass

from .errors import ContractError, DomainError, RangeError

__all__ = ["FloatFormat", "FloatInterval", "BINARY32", "BINARY64"]


@dataclass(frozen=True)
class FloatFormat:
    """An IEEE 754 binary interchange format (binary32 or binary64)."""

    name: str
    precision_bits: int   # significand bits, hidden bit included
    min_exponent: int     # smallest normal binade exponent
    max_exponent: int     # largest finite binade exponent
    width: int            # total encoding width in bits

    # -- bit-level helpers ---------------------------------------------------

    @property
    def _sign_bit(self) -> int:
        return 1 << (self.width - 1)

    @property
    def _inf_bits(self) -> int:
        # exponent field all ones, zero significand
        return ((1 << (self.width - self.precision_bits)) - 1) << (self.precision_bits - 1)

    @property
    def max_finite(self) -> float:
        return self.from_ordinal(self._inf_bits - 1)

    @property
    def smallest_subnormal(self) -> float:
        return math.ldexp(1.0, self.min_exponent - self.precision_bits + 1)

    def _bits(self, x: float) -> int:
        if self.width == 64:
            return struct.unpack("<Q", struct.pack("<d", x))[0]
        return struct.unpack("<I", struct.pack("<f", x))[0]

    def _from_bits(self, b: int) -> float:
        if self.width == 64:
            return struct.unpack("<d", struct.pack("<Q", b))[0]
        return float(struct.unpack("<f", struct.pack("<I", b))[0])

    def is_representable(self, x: float) -> bool:
        """True iff x (a Python float) is exactly a member of this format."""
        if math.isnan(x):
            return False
        if self.width == 64:
            return True
        try:
            return self._from_bits(self._bits(x)) == x
        except OverflowError:
            return False

    def coerce(self, x: float) -> float:
        """Round an arbitrary Python float to this format (nearest-even)."""
        if self.width == 64 or math.isnan(x):
            return x
        try:
            return self._from_bits(self._bits(x))
        except OverflowError:
            return math.inf if x > 0 else -math.inf

    def check_value(self, x: float, what: str = "value") -> float:
        if isinstance(x, bool) or not isinstance(x, (int, float)):
            raise DomainError(f"{what} must be a float, got {type(x).__name__}")
        x = float(x)
        if math.isnan(x):
            raise DomainError(f"{what} is NaN")
        if not self.is_representable(x):
            raise DomainError(f"{what} {x!r} is not representable in {self.name}")
        return x

    # -- total order ---------------------------------------------------------

    def ordinal(self, x: float) -> int:
        """Signed position of x in the total order (-0.0 -> -1, +0.0 -> 0)."""
        x = self.check_value(x)
        b = self._bits(x)
        if b & self._sign_bit:
            return -(b ^ self._sign_bit) - 1
        return b

    def from_ordinal(self, o: int) -> float:
        if o >= 0:
            b = o
        else:
            b = (-o - 1) | self._sign_bit
        if (b & ~self._sign_bit) > self._inf_bits:
            raise RangeError(f"ordinal {o} outside {self.name}")
        return self._from_bits(b)

    def lt(self, a: float, b: float) -> bool:
        return self.ordinal(a) < self.ordinal(b)

    def le(self, a: float, b: float) -> bool:
        return self.ordinal(a) <= self.ordinal(b)

    def eq(self, a: float, b: float) -> bool:
        return self.ordinal(a) == self.ordinal(b)

    def fmin(self, a: float, b: float) -> float:
        return a if self.le(a, b) else b

    def fmax(self, a: float, b: float) -> float:
        return b if self.le(a, b) else a

    def clamp(self, x: float, lo: float, hi: float) -> float:
        return self.fmax(lo, self.fmin(x, hi))

    # -- stepping ------------------------------------------------------------

    def succ(self, x: float) -> float:
        return self.succ_n(x, 1)

    def pred(self, x: float) -> float:
        return self.pred_n(x, 1)

    def succ_n(self, x: float, n: int) -> float:
        """n-fold successor in O(1); raises RangeError past the finite range."""
        if n < 0:
            raise ContractError("n must be nonnegative")
        o = self.ordinal(x) + n
        if o >= self._inf_bits:
            raise RangeError(f"succ_n({x!r}, {n}) leaves the finite {self.name} range")
        return self.from_ordinal(o)

    def pred_n(self, x: float, n: int) -> float:
        if n < 0:
            raise ContractError("n must be nonnegative")
        o = self.ordinal(x) - n
        if -o - 1 >= self._inf_bits:
            raise RangeError(f"pred_n({x!r}, {n}) leaves the finite {self.name} range")
        return self.from_ordinal(o)

    def count(self, lo: float, hi: float) -> int:
        """Number of format floats in [lo, hi], signed zeros counted as two."""
        d = self.ordinal(hi) - self.ordinal(lo)
        if d < 0:
            raise ContractError("count requires lo <= hi in the total order")
        return d + 1

    def distance(self, a: float, b: float) -> int:
        """|ordinal(a) - ordinal(b)|."""
        return abs(self.ordinal(a) - self.ordinal(b))

    def split_point(self, lo: float, hi: float) -> float:
        """Ordinal midpoint; the two halves differ by at most one float."""
        ol, oh = self.ordinal(lo), self.ordinal(hi)
        if oh - ol < 2:
            raise ContractError("split_point requires at least one float strictly between")
        return self.from_ordinal((ol + oh) // 2)

    def gt_by(self, a: float, b: float, k: int) -> bool:
        """True iff a is more than k successor steps above b."""
        if k < 0:
            raise ContractError("k must be nonnegative")
        return self.ordinal(a) - self.ordinal(b) > k

    def lt_by(self, a: float, b: float, k: int) -> bool:
        return self.gt_by(b, a, k)

    # -- binade queries --------------------------------------------------------

    def exponent(self, x: float) -> int:
        """Binade exponent e with 2**e <= |x| < 2**(e+1)."""
        x = self.check_value(x)
        if x == 0.0:
            raise DomainError("exponent of zero is undefined")
        if math.isinf(x):
            raise DomainError("exponent of an infinity is undefined")
        _, e = math.frexp(abs(x))
        return e - 1

    def ulp(self, x: float) -> float:
        """2**(e_x - p + 1) for normal x; the smallest subnormal below that."""
        x = self.check_value(x)
        if math.isinf(x):
            raise DomainError("ulp of an infinity is undefined")
        if x == 0.0:
            return self.smallest_subnormal
        e = max(self.exponent(x), self.min_exponent)
        return math.ldexp(1.0, e - self.precision_bits + 1)


BINARY32 = FloatFormat("binary32", precision_bits=24, min_exponent=-126,
                       max_exponent=127, width=32)
BINARY64 = FloatFormat("binary64", precision_bits=53, min_exponent=-1022,
                       max_exponent=1023, width=64)

_BY_NAME = {f.name: f for f in (BINARY32, BINARY64)}


def format_by_name(name: str) -> FloatFormat:
    try:
        return _BY_NAME[name]
    except KeyError:
        raise DomainError(f"unknown float format {name!r}") from None


@dataclass(frozen=True)
class FloatInterval:
    """A closed interval [lo, hi] of finite machine floats.

    Endpoints are ordered by the total order, so [-0.0, +0.0] is a valid
    two-float interval while [+0.0, -0.0] is not.
    """

    lo: float
    hi: float
    fmt: FloatFormat = BINARY64

    def __post_init__(self):
        lo = self.fmt.check_value(self.lo, "lo")
        hi = self.fmt.check_value(self.hi, "hi")
        if math.isinf(lo) or math.isinf(hi):
            raise DomainError("interval endpoints must be finite")
        if not self.fmt.le(lo, hi):
            raise DomainError(f"interval endpoints out of order: {lo!r} > {hi!r}")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @property
    def count(self) -> int:
        return self.fmt.count(self.lo, self.hi)

    def contains(self, x: float) -> bool:
        return self.fmt.le(self.lo, x) and self.fmt.le(x, self.hi)

    def __repr__(self) -> str:
        return f"FloatInterval({self.lo.hex()}, {self.hi.hex()}, {self.fmt.name})"
