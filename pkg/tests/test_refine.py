import math

import numpy as np
import pytest

import glitchprop as gp
from glitchprop.errors import ContractError, DomainHoleError
from glitchprop.glitches import NO_GLITCHES
from glitchprop.oracle import brute_refine, check_predicate
from glitchprop.refine import (CallBudgetReport, RefineParams, bisect_ub,
                               check_glitch, direct_image, findfmax,
                               findhi_ub, findlo_lb, gallop_lb, gallop_ub,
                               init, linsearch_geq, linsearch_leq,
                               logsearch_ub, lower_bound, upper_bound)
from glitchprop.synth import (DippedIdentity, OrdinalAffine, TabulatedFunction,
                              exact_bounds, inject_dip, monotone_values)

from conftest import make_instance, random_hint

FMT = gp.BINARY64


def params(glitch=NO_GLITCHES, s=8, t=64, f_inv=None):
    return RefineParams(glitch, s, t, f_inv if f_inv else (lambda y: math.nan))


def times_two(x):
    return 2.0 * x


# ---------------------------------------------------------------------------
# entry points: the basic contracts
# ---------------------------------------------------------------------------

def test_upper_bound_exact_solution():
    iv = gp.FloatInterval(0.0, 10.0, FMT)
    res = upper_bound(times_two, 3.0, iv, params(f_inv=lambda y: y / 2))
    assert res == gp.BoundResult(1.5, 9)


def test_lower_bound_exact_solution():
    iv = gp.FloatInterval(0.0, 10.0, FMT)
    res = lower_bound(times_two, 3.0, iv, params(f_inv=lambda y: y / 2))
    assert res == gp.BoundResult(1.5, 4)


def test_upper_bound_no_solution_r5():
    iv = gp.FloatInterval(0.0, 10.0, FMT)
    res = upper_bound(lambda x: x + 1.0, 0.5, iv, params())
    assert res.status == 5
    assert res.value == iv.lo  # unused, set to the opposite end


def test_lower_bound_no_solution_r0():
    iv = gp.FloatInterval(0.0, 10.0, FMT)
    res = lower_bound(lambda x: x + 1.0, 20.0, iv, params())
    assert res.status == 0
    assert res.value == iv.hi


def test_upper_bound_r6_interval_below_y():
    iv = gp.FloatInterval(0.0, 10.0, FMT)
    res = upper_bound(lambda x: x + 1.0, 20.0, iv, params())
    assert res.status == 6
    assert res.value == iv.lo  # whole interval below y


def test_single_glitch_rightmost_matches_oracle(rng):
    for _ in range(50):
        n = 1 << 12
        vals = monotone_values(n, rng, "slope1")
        start = int(rng.integers(10, n - 20))
        inject_dip(vals, start, 5, 3, rng)
        f = TabulatedFunction(FMT, FMT.ordinal(1.0), vals)
        iv = f.domain
        g = exact_bounds(f)
        y = FMT.from_ordinal(int(vals[start - 1]) - int(rng.integers(0, 5)))
        res = upper_bound(f, y, iv, params(g, t=64), random_hint(rng, iv))
        assert res.status in (8, 9)
        ans = brute_refine(f, y, iv)
        if res.status == 9:
            assert res.value == ans.rightmost_sol
        assert check_predicate(res.status, y, iv, res.value, f)


def test_nan_inside_interval_is_domain_hole():
    def f(x):
        return math.nan if 4.0 <= x <= 5.0 else x

    iv = gp.FloatInterval(0.0, 10.0, FMT)
    with pytest.raises(DomainHoleError):
        upper_bound(f, 4.5, iv, params(f_inv=lambda y: y))


def test_infinite_y_rejected():
    iv = gp.FloatInterval(0.0, 10.0, FMT)
    with pytest.raises(gp.DomainError):
        upper_bound(times_two, math.inf, iv, params())


def test_require_validated():
    iv = gp.FloatInterval(0.0, 1.0, FMT)
    bad = gp.GlitchBounds(1, 1, 1, 0.5, 2.0)  # omega outside iv
    with pytest.raises(ContractError):
        upper_bound(times_two, 0.5, iv, params(bad))


# ---------------------------------------------------------------------------
# init
# ---------------------------------------------------------------------------

def test_init_clamps():
    iv = gp.FloatInterval(1.0, 2.0, FMT)
    assert init(5.0, iv, lambda y: 1.5) == 1.5
    assert init(5.0, iv, lambda y: 0.25) == 1.0
    assert init(5.0, iv, lambda y: 99.0) == 2.0
    assert init(5.0, iv, lambda y: math.nan) == FMT.split_point(1.0, 2.0)


# ---------------------------------------------------------------------------
# gallop
# ---------------------------------------------------------------------------

def _check_gallop_ub_post(f, y, iv, d_M, lo, hi):
    fmt = iv.fmt
    assert fmt.le(iv.lo, lo) and fmt.le(lo, hi) and fmt.le(hi, iv.hi)
    if fmt.lt(iv.lo, lo):
        assert fmt.le(f(lo), y)
    if fmt.lt(hi, iv.hi):
        assert fmt.gt_by(f(hi), y, d_M)


def test_gallop_ub_postcondition_random(rng):
    for _ in range(300):
        n = int(rng.integers(4, 1 << 12))
        f = OrdinalAffine(FMT, slope=int(rng.integers(1, 4)))
        o0 = f.o0
        iv = gp.FloatInterval(FMT.from_ordinal(o0), FMT.from_ordinal(o0 + n - 1), FMT)
        y = FMT.from_ordinal(int(rng.integers(f.value_ordinal(o0) - 4,
                                              f.value_ordinal(o0 + n - 1) + 5)))
        i = FMT.from_ordinal(int(rng.integers(o0, o0 + n)))
        d_M = int(rng.integers(0, 5))
        lo, hi = gallop_ub(f, y, iv, d_M, i)
        _check_gallop_ub_post(f, y, iv, d_M, lo, hi)


def test_gallop_ub_edge_cases():
    iv = gp.FloatInterval(0.0, 10.0, FMT)
    # i = x_l, f(x_l) > y: lo = x_l (its clause vacuous)
    lo, hi = gallop_ub(lambda x: x + 5.0, 1.0, iv, 0, 0.0)
    assert lo == 0.0
    # i = x_u, f(x_u) < y: hi = x_u (its clause vacuous)
    lo, hi = gallop_ub(lambda x: x - 20.0, 1.0, iv, 0, 10.0)
    assert hi == 10.0


def test_gallop_lb_mirror(rng):
    for _ in range(100):
        n = int(rng.integers(4, 1 << 10))
        f = OrdinalAffine(FMT, slope=1)
        o0 = f.o0
        iv = gp.FloatInterval(FMT.from_ordinal(o0), FMT.from_ordinal(o0 + n - 1), FMT)
        y = FMT.from_ordinal(int(rng.integers(f.value_ordinal(o0) - 2,
                                              f.value_ordinal(o0 + n - 1) + 3)))
        i = FMT.from_ordinal(int(rng.integers(o0, o0 + n)))
        d_M = int(rng.integers(0, 4))
        lo, hi = gallop_lb(f, y, iv, d_M, i)
        fmt = iv.fmt
        assert fmt.le(iv.lo, lo) and fmt.le(lo, hi) and fmt.le(hi, iv.hi)
        if fmt.lt(hi, iv.hi):
            assert fmt.le(y, f(hi))
        if fmt.lt(iv.lo, lo):
            assert fmt.gt_by(y, f(lo), d_M)


# ---------------------------------------------------------------------------
# findhi_ub and the no-solution analysis
# ---------------------------------------------------------------------------

def _tail_glitch_table(n, shoulder_idx, depth):
    """Rises to index shoulder_idx, then one glitch strictly below the max
    all the way to the right end."""
    vals = np.arange(n, dtype=np.int64) + FMT.ordinal(1.0)
    m = vals[shoulder_idx]
    for i in range(shoulder_idx + 1, n):
        vals[i] = m - depth + ((i - shoulder_idx) % max(1, depth - 1) if depth > 1 else 0)
        vals[i] = min(vals[i], m - 1)
    f = TabulatedFunction(FMT, FMT.ordinal(1.0), vals)
    return f, vals


def test_findhi_ub_no_glitch():
    f = OrdinalAffine(FMT, slope=1)
    iv = gp.FloatInterval(1.0, FMT.succ_n(1.0, 1000), FMT)
    y = FMT.from_ordinal(f.value_ordinal(FMT.ordinal(iv.hi)) + 5)
    assert findhi_ub(f, y, iv, NO_GLITCHES, 16) == iv.lo


def test_findhi_ub_rightmost_at_alpha():
    n, sh, depth = 256, 100, 3
    f, vals = _tail_glitch_table(n, sh, depth)
    iv = f.domain
    alpha = FMT.from_ordinal(f.o_lo + sh)  # onset probe certifies this
    g = gp.GlitchBounds(1, depth, n - sh - 1, alpha, iv.hi)
    y = f(alpha)
    u = findhi_ub(f, y, iv, g, t=n)
    assert u == FMT.succ(alpha)


def test_findhi_ub_refuses_wide_glitch():
    n, sh, depth = 256, 100, 3
    f, vals = _tail_glitch_table(n, sh, depth)
    iv = f.domain
    alpha = FMT.from_ordinal(f.o_lo + sh)
    g = gp.GlitchBounds(1, depth, n - sh - 1, alpha, iv.hi)
    y = FMT.pred(f(alpha))  # above f(x_u) but below f(alpha)
    assert FMT.lt(f(iv.hi), y)
    u = findhi_ub(f, y, iv, g, t=2)  # w_M > t: refuse to search
    assert u == iv.hi


def test_findhi_ub_requires_fxu_below_y():
    f = OrdinalAffine(FMT, slope=1)
    iv = gp.FloatInterval(1.0, FMT.succ_n(1.0, 100), FMT)
    with pytest.raises(ContractError):
        findhi_ub(f, f(iv.lo), iv, NO_GLITCHES, 4)


def test_findlo_lb_mirror():
    f = OrdinalAffine(FMT, slope=1)
    iv = gp.FloatInterval(1.0, FMT.succ_n(1.0, 1000), FMT)
    y = FMT.from_ordinal(f.value_ordinal(FMT.ordinal(iv.lo)) - 5)
    # f(x_l) > y everywhere: the helper certifies that
    assert findlo_lb(f, y, iv, NO_GLITCHES, 16) == iv.hi
    assert check_predicate(1, y, iv, iv.hi, f)


# ---------------------------------------------------------------------------
# linear scans
# ---------------------------------------------------------------------------

def test_linsearch_geq_first_probe_hit():
    f = OrdinalAffine(FMT, slope=1)
    iv = gp.FloatInterval(1.0, FMT.succ_n(1.0, 50), FMT)
    b, hi, xhat = linsearch_geq(f, f(iv.hi), iv, 8, 8)
    assert b == 1 and hi == iv.hi


def test_linsearch_geq_budget_zero():
    f = OrdinalAffine(FMT, slope=1)
    iv = gp.FloatInterval(1.0, FMT.succ_n(1.0, 50), FMT)
    y = FMT.from_ordinal(f.value_ordinal(FMT.ordinal(iv.hi)) + 10)
    b, hi, xhat = linsearch_geq(f, y, iv, 8, 0)
    assert b == 0 and xhat == iv.hi


def test_linsearch_geq_matches_exhaustive(rng):
    for _ in range(50):
        n = 128
        vals = monotone_values(n, rng, "staircase")
        inject_dip(vals, int(rng.integers(60, 110)), 6, 4, rng)
        f = TabulatedFunction(FMT, FMT.ordinal(1.0), vals)
        iv = f.domain
        y = FMT.from_ordinal(int(rng.integers(int(vals.min()), int(vals.max()) + 1)))
        w_M, t = int(rng.integers(1, 20)), int(rng.integers(0, 30))
        b, hi, xhat = linsearch_geq(f, y, iv, w_M, t)
        v = min(t, w_M)
        lo_scan = max(0, n - 1 - v)
        idx = [i for i in range(lo_scan, n) if int(vals[i]) >= FMT.ordinal(y)]
        if idx:
            assert b == 1 and FMT.ordinal(hi) - f.o_lo == max(idx)
        else:
            assert b == 0 and FMT.ordinal(xhat) - f.o_lo == lo_scan


def test_linsearch_leq_and_findfmax():
    vals = np.array([10, 11, 12, 9, 8, 13, 14], dtype=np.int64) + FMT.ordinal(1.0)
    f = TabulatedFunction(FMT, FMT.ordinal(1.0), vals)
    lo, hi = f.domain.lo, f.domain.hi
    y = FMT.from_ordinal(FMT.ordinal(1.0) + 9)
    b, z = linsearch_leq(f, y, 6, lo, hi, FMT)
    assert b == 1 and FMT.ordinal(z) - f.o_lo == 4  # rightmost <= y
    b, z = findfmax(f, y, 6, lo, hi, FMT)
    assert b == 1 and FMT.ordinal(z) - f.o_lo == 0  # leftmost >= y
    y_low = FMT.from_ordinal(FMT.ordinal(1.0) + 2)
    b, z = linsearch_leq(f, y_low, 20, lo, hi, FMT)
    assert b == 0 and z == lo  # frontier reached, nothing found
    b, z = findfmax(f, FMT.from_ordinal(FMT.ordinal(1.0) + 99), 3, lo, hi, FMT)
    assert b == 0 and FMT.ordinal(z) - f.o_lo == 3  # frontier after w_M steps


# ---------------------------------------------------------------------------
# check_glitch
# ---------------------------------------------------------------------------

def _dipped_table(rng, n=512, start=200, width=5, depth=4):
    vals = monotone_values(n, rng, "slope1")
    inject_dip(vals, start, width, depth, rng)
    return TabulatedFunction(FMT, FMT.ordinal(1.0), vals), vals


def test_check_glitch_two_glitches_refuses(rng):
    f, vals = _dipped_table(rng)
    iv = f.domain
    g = gp.GlitchBounds(2, 4, 5, FMT.from_ordinal(f.o_lo + 150),
                        FMT.from_ordinal(f.o_lo + 300))
    y = FMT.from_ordinal(int(vals[100]))
    b, z = check_glitch(f, y, iv, g, 64, FMT.from_ordinal(f.o_lo + 120),
                        FMT.from_ordinal(f.o_lo + 160), FMT.from_ordinal(f.o_lo + 400))
    assert b == 2


def test_check_glitch_finds_rightmost(rng):
    n, start, width, depth = 512, 200, 5, 4
    f, vals = _dipped_table(rng, n, start, width, depth)
    iv = f.domain
    # onset-tight alpha (the dip shoulder), loose omega
    alpha = FMT.from_ordinal(f.o_lo + start - 1)
    omega = FMT.from_ordinal(f.o_lo + start + width + 20)
    g = gp.GlitchBounds(1, depth, width, alpha, omega)
    y = FMT.from_ordinal(int(vals[start:start + width].min()) + 1)
    m = alpha  # the shoulder: f(m) > y as the contract requires
    hi = FMT.from_ordinal(f.o_lo + start + width + 40)
    b, z = check_glitch(f, y, iv, g, 64, iv.lo, m, hi)
    assert b == 1
    expect = max(i for i in range(n) if int(vals[i]) <= FMT.ordinal(y))
    assert FMT.ordinal(z) - f.o_lo == expect


def test_check_glitch_not_reaching_y(rng):
    n, start, width, depth = 512, 200, 5, 4
    f, vals = _dipped_table(rng, n, start, width, depth)
    iv = f.domain
    alpha = FMT.from_ordinal(f.o_lo + start - 1)
    omega = FMT.from_ordinal(f.o_lo + start + width)
    g = gp.GlitchBounds(1, depth, width, alpha, omega)
    y = FMT.from_ordinal(int(vals[start:start + width].min()) - 2)  # below the dip
    m = alpha
    hi = FMT.from_ordinal(f.o_lo + start + width + 40)
    b, z = check_glitch(f, y, iv, g, 64, iv.lo, m, hi)
    assert b == 0


def test_check_glitch_refuses_uncertified_window(rng):
    # loose bounds on both sides, span above both w_M and t: scanning a
    # w_M window can certify nothing, so the helper must refuse
    n, start, width, depth = 2048, 1000, 3, 3
    f, vals = _dipped_table(rng, n, start, width, depth)
    iv = f.domain
    g = gp.GlitchBounds(1, depth, width,
                        FMT.from_ordinal(f.o_lo + 10),
                        FMT.from_ordinal(f.o_lo + n - 10))
    y = FMT.from_ordinal(int(vals[start:start + width].min()))
    m = FMT.from_ordinal(f.o_lo + start + width + 5)  # above y, below omega
    hi = FMT.from_ordinal(f.o_lo + n - 20)
    b, z = check_glitch(f, y, iv, g, t=width, lo=iv.lo, m=m, hi=hi)
    assert b == 2


# ---------------------------------------------------------------------------
# bisect / logsearch
# ---------------------------------------------------------------------------

def test_bisect_ub_monotone_matches_binary_search(rng):
    for _ in range(100):
        n = int(rng.integers(8, 1 << 14))
        f = OrdinalAffine(FMT, slope=int(rng.integers(1, 3)))
        o0 = f.o0
        iv = gp.FloatInterval(FMT.from_ordinal(o0), FMT.from_ordinal(o0 + n - 1), FMT)
        y = FMT.from_ordinal(int(rng.integers(f.value_ordinal(o0),
                                              f.value_ordinal(o0 + n - 1))))
        rep = CallBudgetReport()
        hi = bisect_ub(f, y, iv, NO_GLITCHES, 8, 64, iv.lo, iv.hi, rep)
        fmt = iv.fmt
        assert fmt.le(f(fmt.pred(hi)), y) and fmt.lt(y, f(hi))
        # reference: smallest ordinal with value above y
        expect = o0 + int(np.searchsorted(
            np.arange(f.value_ordinal(o0), f.value_ordinal(o0 + n - 1) + 1, f.slope),
            FMT.ordinal(y), side="right"))
        assert FMT.ordinal(hi) == expect
        assert rep.f_calls <= math.log2(n) + 3


def test_bisect_break_on_exhausted_logsearch(rng):
    # single glitch too wide to search (w_M > t); no logsearch budget:
    # the b=2 path must break with hi unchanged
    n, start, width, depth = 1024, 500, 40, 4
    vals = monotone_values(n, rng, "slope1")
    inject_dip(vals, start, width, depth, rng)
    f = TabulatedFunction(FMT, FMT.ordinal(1.0), vals)
    iv = f.domain
    g = exact_bounds(f)
    assert g.w_M > 2
    y = FMT.from_ordinal(int(vals[start + 1]))
    lo = iv.lo
    hi_in = FMT.from_ordinal(f.o_lo + n - 1)
    assert FMT.lt(y, f(hi_in))
    hi = bisect_ub(f, y, iv, gp.GlitchBounds(1, g.d_M, g.w_M, g.alpha, g.omega),
                   s=0, t=1, lo=lo, hi=hi_in)
    # sound either way; with no search budget it cannot land inside the dip
    assert FMT.lt(y, f(hi))


def test_logsearch_ub_contract(rng):
    f = OrdinalAffine(FMT, slope=1)
    lo = 1.0
    hi = FMT.succ_n(1.0, 4096)
    y = f(FMT.succ_n(1.0, 100))
    z = logsearch_ub(f, 0, FMT.succ(lo), hi, y, 1, FMT)
    assert FMT.lt(z, hi) and FMT.gt_by(f(z), y, 0)
    # exhausted budget: z = hi
    assert logsearch_ub(f, 0, FMT.succ(lo), hi, y, 0, FMT) == hi
    # margin already at mid
    mid = FMT.succ_n(1.0, 2000)
    assert logsearch_ub(f, 0, mid, hi, y, 1, FMT) == mid
    # no point clears the margin
    y_top = f(hi)
    assert logsearch_ub(f, 5, FMT.succ(lo), hi, y_top, 3, FMT) == hi


def test_logsearch_probe_schedule_matches_oracle(rng):
    # re-run the documented schedule: first mid, then ordinal bisection
    f = OrdinalAffine(FMT, slope=1)
    for _ in range(50):
        a = int(rng.integers(0, 1 << 20))
        b = a + int(rng.integers(2, 1 << 16))
        mid = FMT.from_ordinal(f.o0 + a)
        hi = FMT.from_ordinal(f.o0 + b)
        y = FMT.from_ordinal(int(rng.integers(f.value_ordinal(f.o0 + a),
                                              f.value_ordinal(f.o0 + b))))
        d_M = int(rng.integers(0, 3))
        got = logsearch_ub(f, d_M, mid, hi, y, 1, FMT)

        def margin(o):
            return f.value_ordinal(o) - FMT.ordinal(y) > d_M

        ao, bo = f.o0 + a, f.o0 + b
        z = bo
        if margin(ao):
            z = ao
        else:
            while bo - ao >= 2:
                m = (ao + bo) // 2
                if margin(m):
                    z, bo = m, m
                else:
                    ao = m
        assert FMT.ordinal(got) == z


# ---------------------------------------------------------------------------
# direct propagation
# ---------------------------------------------------------------------------

def test_direct_image_exact_when_glitch_free():
    f = OrdinalAffine(FMT, slope=1)
    iv = gp.FloatInterval(1.0, FMT.succ_n(1.0, 100), FMT)
    img = direct_image(f, iv, NO_GLITCHES, gp.MonotoneClass.ISOTONIC)
    assert img.lo == f(iv.lo) and img.hi == f(iv.hi)


def test_direct_image_no_widening_when_disjoint(rng):
    f, vals = _dipped_table(rng, 512, 400, 5, 4)
    sub = gp.FloatInterval(FMT.from_ordinal(f.o_lo + 10),
                           FMT.from_ordinal(f.o_lo + 100), FMT)
    g = exact_bounds(f)
    img = direct_image(f, sub, g.clamped_to(sub), gp.MonotoneClass.ISOTONIC)
    assert img.lo == f(sub.lo) and img.hi == f(sub.hi)


def test_direct_image_encloses_brute_minmax(rng):
    for _ in range(30):
        n = 1 << 10
        vals = monotone_values(n, rng, "staircase")
        inject_dip(vals, int(rng.integers(100, 800)), 7, 5, rng)
        f = TabulatedFunction(FMT, FMT.ordinal(1.0), vals)
        iv = f.domain
        g = exact_bounds(f).clamped_to(iv)
        img = direct_image(f, iv, g, gp.MonotoneClass.ISOTONIC)
        assert FMT.le(img.lo, FMT.from_ordinal(int(vals.min())))
        assert FMT.le(FMT.from_ordinal(int(vals.max())), img.hi)
        # antitonic mirror
        fa = TabulatedFunction(FMT, f.o_lo, -vals)
        img_a = direct_image(fa, iv, g, gp.MonotoneClass.ANTITONIC)
        assert FMT.le(img_a.lo, FMT.from_ordinal(int((-vals).min())))
        assert FMT.le(FMT.from_ordinal(int((-vals).max())), img_a.hi)


# ---------------------------------------------------------------------------
# mirror symmetry and instrumentation
# ---------------------------------------------------------------------------

def test_mirror_symmetry_small_instances(rng):
    for _ in range(60):
        f, iv, g, y = make_instance(rng, max_count=1 << 10)
        hint = random_hint(rng, iv)
        p = RefineParams(g, 4, 16, hint)
        res_l = lower_bound(f, y, iv, p)

        def refl(x):
            return -f(-x)

        riv = gp.FloatInterval(-iv.hi, -iv.lo, FMT)
        rp = RefineParams(g.reflected(), 4, 16, lambda yy: -hint(-yy))
        res_u = upper_bound(refl, -y, riv, rp)
        assert res_l.status == res_u.status - 5
        assert FMT.ordinal(res_l.value) == FMT.ordinal(-res_u.value)


def test_instrumentation_does_not_change_results(rng):
    for _ in range(40):
        f, iv, g, y = make_instance(rng, max_count=1 << 9)
        p = RefineParams(g, 4, 16, random_hint(rng, iv))
        rep = CallBudgetReport()
        a = upper_bound(f, y, iv, p, rep)
        b = upper_bound(f, y, iv, p)
        assert a == b
        assert rep.f_calls > 0
        assert rep.interval_size == iv.count
