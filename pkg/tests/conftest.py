"""Shared generators and exact helpers for the test suite."""

from __future__ import annotations

from fractions import Fraction

import numpy as np
import pytest

import glitchprop as gp
from glitchprop.oracle import hp_const
from glitchprop.synth import (TabulatedFunction, exact_bounds, inject_dip,
                              monotone_values)

FMT = gp.BINARY64


def pio2_fraction(bits: int = 256) -> Fraction:
    m, e = hp_const("pi_over_2", bits)
    return Fraction(m) * Fraction(2) ** e


def two_over_pi_fraction(bits: int = 256) -> Fraction:
    m, e = hp_const("two_over_pi", bits)
    return Fraction(m) * Fraction(2) ** e


def cmp_x_vs_pio2_mult(x: float, k: int) -> int:
    """Exact sign of x - k*pi/2 through the oracle's 256-bit table."""
    lhs = Fraction(x)
    rhs = k * pio2_fraction()
    if lhs == rhs:
        return 0
    return 1 if lhs > rhs else -1


def make_instance(rng: np.random.Generator, *, max_count: int = 1 << 16,
                  k_dips=(0, 4), loosen: bool = True, base_kinds=None):
    """One randomized refinement instance.

    Returns (f, iv, glitch_bounds, y, params_seed) with bounds that
    dominate the function's anomalies (exact hull bounds, optionally
    loosened within the interval).
    """
    if base_kinds is None:
        base_kinds = ["slope1", "affine", "staircase", "jumpy"]
    n = 1 << int(rng.integers(4, max_count.bit_length()))
    n = int(rng.integers(n // 2 + 2, n + 1))
    vals = monotone_values(n, rng, str(rng.choice(base_kinds)))
    lo_d, hi_d = k_dips
    pos = 2
    for _ in range(int(rng.integers(lo_d, hi_d + 1))):
        if pos + 14 >= n:
            break
        start = int(rng.integers(pos, min(pos + 300, n - 11)))
        width = int(rng.integers(1, 9))
        depth = int(rng.integers(1, 7))
        if start + width + 3 >= n:
            break
        inject_dip(vals, start, width, depth, rng)
        pos = start + width + 3
    f = TabulatedFunction(FMT, FMT.ordinal(1.0), vals)
    iv = f.domain
    tb = exact_bounds(f).clamped_to(iv)
    if tb.n_g > 0 and loosen:
        a_o = max(FMT.ordinal(tb.alpha) - int(rng.integers(0, 6)), FMT.ordinal(iv.lo))
        w_o = min(FMT.ordinal(tb.omega) + int(rng.integers(0, 6)), FMT.ordinal(iv.hi))
        tb = gp.GlitchBounds(tb.n_g + int(rng.integers(0, 3)),
                             tb.d_M + int(rng.integers(0, 3)),
                             tb.w_M + int(rng.integers(0, 4)),
                             FMT.from_ordinal(a_o), FMT.from_ordinal(w_o))
    vmin, vmax = int(vals.min()), int(vals.max())
    y = FMT.from_ordinal(int(rng.integers(vmin - 3, vmax + 4)))
    return f, iv, tb, y


def random_hint(rng: np.random.Generator, iv: gp.FloatInterval):
    """A rough-inverse stub of random quality (sometimes NaN)."""
    fmt = iv.fmt
    roll = rng.random()
    if roll < 0.1:
        return lambda y: float("nan")
    o = int(rng.integers(fmt.ordinal(iv.lo), fmt.ordinal(iv.hi) + 1))
    h = fmt.from_ordinal(o)
    return lambda y, h=h: h


def leftmost_ge(vals: np.ndarray, y_o: int):
    idx = np.flatnonzero(vals >= y_o)
    return None if len(idx) == 0 else int(idx[0])


def rightmost_le(vals: np.ndarray, y_o: int):
    idx = np.flatnonzero(vals <= y_o)
    return None if len(idx) == 0 else int(idx[-1])


@pytest.fixture
def rng():
    return np.random.default_rng(20260810)
