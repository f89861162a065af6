"""Inverse propagation for quasi-monotonic floating-point functions.

Given an implementation f that is isotonic up to bounded glitches, a
query value y and an interval [x_l, x_u], `upper_bound` refines the
upper end and `lower_bound` the lower end of the set of x with
f(x) = y. Each returns a `BoundResult` whose status code r states the
postcondition that provably holds (see BoundResult). The search runs
in three phases: an initial guess from a rough inverse, a galloping
phase that brackets the crossing, and glitch-aware bisection with
float-by-float fallbacks whose cost is capped by the budgets s (coarse
log-searches) and t (linear steps).

Soundness never depends on the tightness of the supplied glitch bounds,
only on their validity (they must dominate the function's anomalies in
both scan directions, as the surveyor's summaries do). Where the
supplied bounds are too loose to certify that a float-by-float scan
covered a suspect stretch, the engine degrades to the non-tight status
(r = 7 or 2) instead of claiming an unsound cut.

All comparisons are in the total float order; -0.0 and +0.0 are
distinct values throughout. f returning NaN anywhere the search looks
raises DomainHoleError, since every status quantifies over whole
sub-intervals and a skipped point would void that.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

from .errors import ContractError, DomainError, DomainHoleError
from .formats import BINARY64, FloatFormat, FloatInterval
from .glitches import GlitchBounds, MonotoneClass

__all__ = [
    "BoundResult",
    "RefineParams",
    "CallBudgetReport",
    "init",
    "gallop_ub",
    "gallop_lb",
    "findhi_ub",
    "findlo_lb",
    "linsearch_geq",
    "linsearch_leq",
    "findfmax",
    "check_glitch",
    "bisect_ub",
    "logsearch_ub",
    "upper_bound",
    "lower_bound",
    "direct_image",
]


@dataclass(frozen=True)
class BoundResult:
    """A refined bound plus the status code naming its guarantee.

    For a query y over [x_l, x_u] and returned value v, status r means:

      r=5  f(x) > y everywhere in [x_l, x_u]; no solution, v unused
      r=6  f(x) < y for every x in [v, x_u]
      r=7  f(x) > y for every x in [v, x_u] (sound, possibly not tight)
      r=8  f(pred(v)) < y and f(x) > y for every x in [v, x_u]
      r=9  f(v) = y and f(x) > y for every x in (v, x_u]

    Lower-bound statuses 0..4 are the exact mirrors of 5..9 (sides and
    inequalities reflected):

      r=0  f(x) < y everywhere in [x_l, x_u]; no solution, v unused
      r=1  f(x) > y for every x in [x_l, v]
      r=2  f(x) < y for every x in [x_l, v]
      r=3  f(succ(v)) > y and f(x) < y for every x in [x_l, v]
      r=4  f(v) = y and f(x) < y for every x in [x_l, v)

    All comparisons are in the total float order.
    """

    value: float
    status: int


@dataclass(frozen=True)
class RefineParams:
    """Glitch data plus search budgets.

    f_inv is a rough inverse of f used only to seed the gallop; it may
    be arbitrarily inaccurate (even constant), but must be callable on
    every queried y. s caps the number of coarse log-searches, t the
    float-by-float steps of any one linear stretch.
    """

    glitch: GlitchBounds
    s: int
    t: int
    f_inv: Callable[[float], float]

    def __post_init__(self):
        if self.s < 0 or self.t < 0:
            raise DomainError("budgets s and t must be nonnegative")


@dataclass
class CallBudgetReport:
    """Filled by the instrumented entry points; never alters control flow."""

    f_calls: int = 0
    interval_size: int = 0


class _Evaluator:
    """Caching, counting wrapper around f.

    Re-probing a point an algorithm already evaluated is free, as in any
    careful implementation that keeps f(lo), f(hi) in locals; the call
    count reported is the number of distinct evaluations.
    """

    __slots__ = ("f", "fmt", "cache", "calls")

    def __init__(self, f: Callable[[float], float], fmt: FloatFormat):
        self.f = f
        self.fmt = fmt
        self.cache: dict[int, float] = {}
        self.calls = 0

    def __call__(self, x: float) -> float:
        o = self.fmt.ordinal(x)
        v = self.cache.get(o)
        if v is None:
            v = float(self.f(x))
            self.calls += 1
            if math.isnan(v):
                raise DomainHoleError(f"f({x!r}) is NaN inside the search interval")
            if not self.fmt.is_representable(v):
                raise DomainError(f"f({x!r}) = {v!r} is not a {self.fmt.name} value")
            self.cache[o] = v
        return v


def _require(cond: bool, msg: str) -> None:
    if not cond:
        raise ContractError(msg)


def _as_evaluator(f, fmt) -> _Evaluator:
    return f if isinstance(f, _Evaluator) else _Evaluator(f, fmt)


def _finish(ev: _Evaluator, iv: FloatInterval, report: Optional[CallBudgetReport]):
    if report is not None:
        report.f_calls = ev.calls
        report.interval_size = iv.count


# ---------------------------------------------------------------------------
# seeding and galloping
# ---------------------------------------------------------------------------

def init(y: float, iv: FloatInterval, f_inv: Callable[[float], float]) -> float:
    """Clamp the rough inverse's guess into the interval; NaN -> midpoint."""
    fmt = iv.fmt
    v = float(f_inv(y))
    if math.isnan(v):
        return fmt.from_ordinal((fmt.ordinal(iv.lo) + fmt.ordinal(iv.hi)) // 2)
    return fmt.clamp(fmt.coerce(v), iv.lo, iv.hi)


def _gallop_ub(ev, y, iv, d_M, i):
    fmt = iv.fmt
    ol, ou, oi = fmt.ordinal(iv.lo), fmt.ordinal(iv.hi), fmt.ordinal(i)
    _require(ol <= oi <= ou, "gallop seed outside the interval")
    fi = ev(i)
    if fmt.le(fi, y):
        # i is a valid lo; gallop right for a hi with the d_M margin
        lo_o = oi
        step = 1
        while oi < ou:
            cand_o = min(oi + step, ou)
            cand = fmt.from_ordinal(cand_o)
            fc = ev(cand)
            if fmt.gt_by(fc, y, d_M):
                return fmt.from_ordinal(lo_o), cand
            if cand_o == ou:
                break
            if fmt.le(fc, y):
                lo_o = cand_o
            step <<= 1
        return fmt.from_ordinal(lo_o), iv.hi
    # f(i) > y: gallop right for the margin, left for a point below y
    if fmt.gt_by(fi, y, d_M):
        hi = i
    else:
        hi = iv.hi
        step = 1
        while oi < ou:
            cand_o = min(oi + step, ou)
            cand = fmt.from_ordinal(cand_o)
            if fmt.gt_by(ev(cand), y, d_M):
                hi = cand
                break
            if cand_o == ou:
                break
            step <<= 1
    lo = iv.lo
    step = 1
    while oi > ol:
        cand_o = max(oi - step, ol)
        cand = fmt.from_ordinal(cand_o)
        if fmt.le(ev(cand), y):
            lo = cand
            break
        if cand_o == ol:
            break
        step <<= 1
    return lo, hi


def gallop_ub(f, y: float, iv: FloatInterval, d_M: int, i: float,
              report: Optional[CallBudgetReport] = None):
    """Bracket the upper crossing from seed i.

    Returns (lo, hi) with x_l <= lo <= hi <= x_u, f(lo) <= y whenever
    lo > x_l, and f(hi) above y by more than d_M steps whenever hi < x_u.
    """
    ev = _as_evaluator(f, iv.fmt)
    out = _gallop_ub(ev, y, iv, d_M, i)
    _finish(ev, iv, report)
    return out


def gallop_lb(f, y: float, iv: FloatInterval, d_M: int, i: float,
              report: Optional[CallBudgetReport] = None):
    """Mirror of gallop_ub: f(hi) >= y whenever hi < x_u, f(lo) below y
    by more than d_M steps whenever lo > x_l."""
    fmt = iv.fmt
    g, riv = _reflect_problem(f, iv)
    ev = _as_evaluator(g, fmt)
    lo_r, hi_r = _gallop_ub(ev, -y, riv, d_M, -i)
    _finish(ev, iv, report)
    return -hi_r, -lo_r


# ---------------------------------------------------------------------------
# linear scans
# ---------------------------------------------------------------------------

def _linsearch_geq(ev, y, iv, w_M, t):
    fmt = iv.fmt
    v = min(t, w_M)
    ou = fmt.ordinal(iv.hi)
    xhat_o = max(fmt.ordinal(iv.lo), ou - v)
    for o in range(ou, xhat_o - 1, -1):
        x = fmt.from_ordinal(o)
        if not fmt.lt(ev(x), y):
            return 1, x, fmt.from_ordinal(xhat_o)
    return 0, None, fmt.from_ordinal(xhat_o)


def linsearch_geq(f, y: float, iv: FloatInterval, w_M: int, t: int,
                  report: Optional[CallBudgetReport] = None):
    """Backward scan from x_u over at most min(t, w_M) steps for f >= y.

    Returns (b, hi, xhat): b=1 with hi the rightmost point where
    f(hi) >= y and everything right of it strictly below y; b=0 with
    hi=None once the scan frontier xhat is reached with f < y throughout
    [xhat, x_u].
    """
    ev = _as_evaluator(f, iv.fmt)
    out = _linsearch_geq(ev, y, iv, w_M, t)
    _finish(ev, iv, report)
    return out


def _linsearch_leq(ev, y, fmt, w_M, s_l, s_u):
    o_l = fmt.ordinal(s_l)
    o_u = fmt.ordinal(s_u)
    _require(o_l <= o_u, "linsearch_leq window out of order")
    xhat_o = max(o_l, o_u - w_M)
    for o in range(o_u, xhat_o - 1, -1):
        x = fmt.from_ordinal(o)
        if fmt.le(ev(x), y):
            return 1, x, fmt.from_ordinal(xhat_o)
    xhat = fmt.from_ordinal(xhat_o)
    return 0, xhat, xhat


def linsearch_leq(f, y: float, w_M: int, s_l: float, s_u: float,
                  fmt: FloatFormat = None,
                  report: Optional[CallBudgetReport] = None):
    """Backward scan from s_u over at most w_M steps for f <= y.

    Returns (b, z): b=1 with z the rightmost point of the scan window
    where f(z) <= y and f > y strictly right of it up to s_u; b=0 with
    z the scan frontier max(s_l, pred_n(s_u, w_M)), the whole window
    verified strictly above y.
    """
    if fmt is None:
        fmt = BINARY64
    ev = _as_evaluator(f, fmt)
    b, z, _ = _linsearch_leq(ev, y, fmt, w_M, s_l, s_u)
    if report is not None:
        report.f_calls = ev.calls
        report.interval_size = fmt.count(s_l, s_u)
    return b, z


def findfmax(f, y: float, w_M: int, s_l: float, s_u: float,
             fmt: FloatFormat = None,
             report: Optional[CallBudgetReport] = None):
    """Forward mirror of linsearch_leq: scan up from s_l for f >= y.

    Returns (b, z): b=1 with z the leftmost scanned point where
    f(z) >= y and f < y strictly left of it down to s_l; b=0 with z the
    frontier min(s_u, succ_n(s_l, w_M)), the window verified below y.
    """
    if fmt is None:
        fmt = BINARY64
    ev = _as_evaluator(f, fmt)
    o_l, o_u = fmt.ordinal(s_l), fmt.ordinal(s_u)
    _require(o_l <= o_u, "findfmax window out of order")
    xhat_o = min(o_u, o_l + w_M)
    b, z = 0, fmt.from_ordinal(xhat_o)
    for o in range(o_l, xhat_o + 1):
        x = fmt.from_ordinal(o)
        if not fmt.lt(ev(x), y):
            b, z = 1, x
            break
    if report is not None:
        report.f_calls = ev.calls
        report.interval_size = fmt.count(s_l, s_u)
    return b, z


# ---------------------------------------------------------------------------
# glitch-aware helpers
# ---------------------------------------------------------------------------

def _findhi_ub(ev, y, iv, glitch, t):
    fmt = iv.fmt
    x_l, x_u = iv.lo, iv.hi
    g = glitch
    fxu = ev(x_u)
    _require(fmt.lt(fxu, y), "findhi_ub requires f(x_u) < y")
    if g.n_g == 0 or fmt.lt(g.omega, x_u) or fmt.gt_by(y, fxu, g.d_M):
        # x_u is past every glitch or too far below y to be inside one
        # deep enough: the whole interval lies below y
        return x_l
    fa = ev(g.alpha)
    fa1 = ev(fmt.succ(g.alpha)) if fmt.lt(g.alpha, x_u) else None
    drops_after_alpha = fa1 is not None and fmt.lt(fa1, fa)
    if g.n_g == 1 and (g.w_M > t or (drops_after_alpha and not fmt.lt(y, fa))):
        if fmt.lt(y, fa) or not drops_after_alpha:
            # either no solution can hide right of alpha, or the glitch
            # is too wide to search: x_u is trivially a sound answer
            return x_u
        if fmt.eq(y, fa):
            # alpha attains y and everything after it is one glitch
            # strictly below y: alpha is the rightmost solution
            return fmt.succ(g.alpha)
        return x_l
    b, hi, xhat = _linsearch_geq(ev, y, iv, g.w_M, t)
    if b == 1:
        return fmt.succ(hi)
    if t >= g.w_M:
        return x_l
    return xhat


def findhi_ub(f, y: float, iv: FloatInterval, glitch: GlitchBounds, t: int,
              report: Optional[CallBudgetReport] = None) -> float:
    """Find u with f < y on all of [u, x_u], given f(x_u) < y.

    This is the helper behind status 6: it distinguishes "no solution at
    all" from "x_u is inside a glitch" by probing the glitch bounds and,
    when affordable, scanning backward float by float.
    """
    ev = _as_evaluator(f, iv.fmt)
    glitch.require_for(iv)
    out = _findhi_ub(ev, y, iv, glitch, t)
    _finish(ev, iv, report)
    return out


def findlo_lb(f, y: float, iv: FloatInterval, glitch: GlitchBounds, t: int,
              report: Optional[CallBudgetReport] = None) -> float:
    """Mirror of findhi_ub: find l with f > y on all of [x_l, l], given
    f(x_l) > y (the helper behind status 1)."""
    fmt = iv.fmt
    g, riv = _reflect_problem(f, iv)
    ev = _as_evaluator(g, fmt)
    glitch.require_for(iv)
    out = _findhi_ub(ev, -y, riv, glitch.reflected(), t)
    _finish(ev, iv, report)
    return -out


def _check_glitch(ev, y, iv, glitch, t, lo, m, hi):
    fmt = iv.fmt
    g = glitch
    _require(g.n_g > 0, "check_glitch requires n_g > 0")
    _require(fmt.le(iv.lo, lo) and fmt.le(lo, m) and fmt.le(m, hi)
             and fmt.le(hi, iv.hi), "check_glitch window out of order")
    _require(fmt.lt(y, ev(m)) and fmt.lt(y, ev(hi)),
             "check_glitch requires f(m) > y and f(hi) > y")
    _require(fmt.le(g.alpha, hi) and fmt.le(m, g.omega),
             "check_glitch requires alpha <= hi and omega >= m")
    if not (g.n_g == 1 and g.w_M <= t):
        return 2, None
    fa = ev(g.alpha)
    fa1 = ev(fmt.succ(g.alpha)) if fmt.lt(g.alpha, iv.hi) else None
    fo = ev(g.omega)
    fo1 = ev(fmt.pred(g.omega)) if fmt.lt(iv.lo, g.omega) else None
    alpha_tight = fa1 is not None and fmt.lt(fa1, fa)    # proves onset at alpha
    omega_rises = fo1 is not None and fmt.lt(fo1, fo)    # end may be at omega
    span_small = not fmt.gt_by(g.omega, g.alpha, t)
    if not (alpha_tight or omega_rises or span_small):
        return 2, None
    s_l = fmt.fmax(g.alpha, lo)
    if alpha_tight:
        # onset certified: the glitch lies within w_M floats above alpha
        su_o = min(fmt.ordinal(g.alpha) + g.w_M, fmt.ordinal(hi))
        s_u = fmt.from_ordinal(su_o)
    else:
        s_u = fmt.fmin(g.omega, hi)
    b, z, xhat = _linsearch_leq(ev, y, fmt, g.w_M, s_l, s_u)
    if b == 1:
        return 1, z
    # glitch points sit strictly above alpha and the claim quantifies
    # over [m, hi] only, so the scan certifies "no dip reaches y" once
    # it got down to succ(alpha) or to m, whichever is higher
    if fmt.ordinal(xhat) <= max(fmt.ordinal(g.alpha) + 1, fmt.ordinal(m)):
        return 0, None
    # otherwise the bounds were too loose to pin the glitch against the
    # scanned window; claiming "no dip" off a partial scan would be
    # unsound, so refuse instead
    return 2, None


def check_glitch(f, y: float, iv: FloatInterval, glitch: GlitchBounds, t: int,
                 lo: float, m: float, hi: float,
                 report: Optional[CallBudgetReport] = None):
    """Search the (single, narrow) glitch for a point with f <= y.

    Returns (b, z): b=0 certifies f > y on all of [m, hi]; b=1 returns
    the rightmost z in [lo, hi] with f(z) <= y and f > y on (z, hi];
    b=2 refuses (several glitches, too wide, or bounds too loose to
    certify the scan covered the glitch).
    """
    ev = _as_evaluator(f, iv.fmt)
    out = _check_glitch(ev, y, iv, glitch, t, lo, m, hi)
    _finish(ev, iv, report)
    return out


def _logsearch_ub(ev, d_M, mid, hi, y, s_budget, fmt):
    if s_budget <= 0:
        return hi
    if fmt.gt_by(ev(mid), y, d_M):
        return mid
    a_o, b_o = fmt.ordinal(mid), fmt.ordinal(hi)
    z = hi
    while b_o - a_o >= 2:
        m_o = (a_o + b_o) // 2
        x = fmt.from_ordinal(m_o)
        if fmt.gt_by(ev(x), y, d_M):
            z = x
            b_o = m_o
        else:
            a_o = m_o
    return z


def logsearch_ub(f, d_M: int, mid: float, hi: float, y: float, s_budget: int,
                 fmt: FloatFormat = None,
                 report: Optional[CallBudgetReport] = None) -> float:
    """Binary search in [mid, hi] for a point clearing the d_M margin.

    Returns z in [mid, hi] with f(z) above y by more than d_M steps
    whenever z < hi; z = hi means no such point was found (or the
    budget was already exhausted). Costs at most log2(count([mid, hi]))
    evaluations.
    """
    if fmt is None:
        fmt = BINARY64
    ev = _as_evaluator(f, fmt)
    _require(fmt.lt(mid, hi), "logsearch_ub requires mid < hi")
    out = _logsearch_ub(ev, d_M, mid, hi, y, s_budget, fmt)
    if report is not None:
        report.f_calls = ev.calls
        report.interval_size = fmt.count(mid, hi)
    return out


def _bisect_ub(ev, y, iv, glitch, s, t, lo, hi):
    fmt = iv.fmt
    g = glitch
    _require(fmt.le(iv.lo, lo) and fmt.lt(lo, hi) and fmt.le(hi, iv.hi),
             "bisect_ub requires x_l <= lo < hi <= x_u")
    _require(fmt.le(ev(lo), y) and fmt.lt(y, ev(hi)),
             "bisect_ub requires f(lo) <= y < f(hi)")
    s_left = s
    while fmt.gt_by(hi, lo, 1):
        mid = fmt.split_point(lo, hi)
        fm = ev(mid)
        if fmt.le(fm, y):
            lo = mid
        elif (g.n_g == 0 or fmt.le(hi, g.alpha) or fmt.le(g.omega, mid)
              or fmt.gt_by(fm, y, g.d_M)):
            # no glitch can reach y inside [mid, hi]
            hi = mid
        else:
            b, z = _check_glitch(ev, y, iv, g, t, lo, mid, hi)
            if b == 0:
                hi = mid
            elif b == 1:
                hi = fmt.succ(z)
                break
            else:
                z = _logsearch_ub(ev, g.d_M, mid, hi, y, s_left, fmt)
                if s_left > 0:
                    s_left -= 1
                if fmt.lt(z, hi):
                    hi = z
                else:
                    break
    return hi


def bisect_ub(f, y: float, iv: FloatInterval, glitch: GlitchBounds,
              s: int, t: int, lo: float, hi: float,
              report: Optional[CallBudgetReport] = None) -> float:
    """Glitch-aware bisection; shrinks hi while keeping f > y on [hi, x_u].

    Requires f(lo) <= y < f(hi) and f > y throughout [hi, x_u]. On
    return the same holds for the new hi, and when the glitch data pins
    a single narrow glitch the cut is optimal: f(pred(hi)) <= y.
    """
    ev = _as_evaluator(f, iv.fmt)
    glitch.require_for(iv)
    out = _bisect_ub(ev, y, iv, glitch, s, t, lo, hi)
    _finish(ev, iv, report)
    return out


# ---------------------------------------------------------------------------
# the entry points
# ---------------------------------------------------------------------------

def upper_bound(f, y: float, iv: FloatInterval, params: RefineParams,
                report: Optional[CallBudgetReport] = None) -> BoundResult:
    """Refine the upper end of {x in [x_l, x_u] : f(x) = y}.

    Returns a BoundResult with status in {5..9}; see BoundResult for the
    exact guarantee of each status. When f is glitch-free, or has one
    narrow glitch whose supplied bounds are tight enough to search, the
    result is optimal (status 8 or 9) whenever f(x_l) <= y <= f(x_u).
    """
    fmt = iv.fmt
    y = fmt.check_value(y, "y")
    if math.isinf(y):
        raise DomainError("query value y must be finite")
    g = params.glitch
    g.require_for(iv)
    ev = _as_evaluator(f, fmt)
    res = _upper_bound(ev, y, iv, g, params)
    _finish(ev, iv, report)
    return res


def _upper_bound(ev, y, iv, g, params):
    fmt = iv.fmt
    x_l, x_u = iv.lo, iv.hi
    i = init(y, iv, params.f_inv)
    lo, hi = _gallop_ub(ev, y, iv, g.d_M, i)
    fhi = ev(hi)
    if fmt.lt(fhi, y):
        # gallop post: hi = x_u here
        return BoundResult(_findhi_ub(ev, y, iv, g, params.t), 6)
    if fmt.eq(fhi, y):
        return BoundResult(hi, 9)
    flo = ev(lo)
    if fmt.lt(y, flo):
        # gallop post: lo = x_l here
        if g.n_g == 0 or fmt.gt_by(ev(g.alpha), y, g.d_M):
            return BoundResult(x_l, 5)
        b, z = _check_glitch(ev, y, iv, g, params.t, lo, lo, hi)
        if b == 0:
            return BoundResult(x_l, 5)
        if b == 1:
            if fmt.eq(ev(z), y):
                return BoundResult(z, 9)
            return BoundResult(fmt.succ(z), 8)
        return BoundResult(fmt.fmin(hi, g.omega), 7)
    hi = _bisect_ub(ev, y, iv, g, params.s, params.t, lo, hi)
    t_left = params.t
    fp = ev(fmt.pred(hi))
    while fmt.lt(y, fp) and t_left > 0:
        hi = fmt.pred(hi)
        t_left -= 1
        fp = ev(fmt.pred(hi))
    if fmt.lt(fp, y):
        return BoundResult(hi, 8)
    if fmt.eq(fp, y):
        return BoundResult(fmt.pred(hi), 9)
    return BoundResult(hi, 7)


def _reflect_problem(f, iv: FloatInterval):
    """The upper problem for g(x) = -f(-x) over the reflected interval."""

    def g(xr: float) -> float:
        return -float(f(-xr))

    return g, FloatInterval(-iv.hi, -iv.lo, iv.fmt)


def lower_bound(f, y: float, iv: FloatInterval, params: RefineParams,
                report: Optional[CallBudgetReport] = None) -> BoundResult:
    """Refine the lower end of {x in [x_l, x_u] : f(x) = y}.

    Exact mirror of upper_bound, realized by reflecting the problem
    through x -> -x and y -> -y; statuses come back in {0..4} with
    0<->5, ..., 4<->9.
    """
    fmt = iv.fmt
    y = fmt.check_value(y, "y")
    if math.isinf(y):
        raise DomainError("query value y must be finite")
    g_bounds = params.glitch
    g_bounds.require_for(iv)
    gfun, riv = _reflect_problem(f, iv)
    ev = _as_evaluator(gfun, fmt)
    f_inv = params.f_inv

    def inv_r(yr: float) -> float:
        return -float(f_inv(-yr))

    rparams = RefineParams(glitch=g_bounds.reflected(), s=params.s,
                           t=params.t, f_inv=inv_r)
    res = _upper_bound(ev, -y, riv, rparams.glitch, rparams)
    _finish(ev, iv, report)
    return BoundResult(-res.value, res.status - 5)


def direct_image(f, iv: FloatInterval, glitch: GlitchBounds,
                 branch_class: MonotoneClass,
                 report: Optional[CallBudgetReport] = None) -> FloatInterval:
    """Sound enclosure of {f(x) : x in iv} for a single-branch interval.

    Endpoint images are widened outward by d_M float steps when the
    interval meets [alpha, omega], which covers anything a glitch can do
    inside; with no glitches the enclosure is exactly [f(x_l), f(x_u)]
    (reversed for an antitonic branch).
    """
    fmt = iv.fmt
    ev = _as_evaluator(f, fmt)
    flo, fhi = ev(iv.lo), ev(iv.hi)
    if branch_class is MonotoneClass.ANTITONIC:
        flo, fhi = fhi, flo
    g = glitch
    if g.n_g > 0 and not (fmt.lt(iv.hi, g.alpha) or fmt.lt(g.omega, iv.lo)):
        max_o = fmt.ordinal(fmt.max_finite)
        flo = fmt.from_ordinal(max(fmt.ordinal(flo) - g.d_M, -max_o - 1))
        fhi = fmt.from_ordinal(min(fmt.ordinal(fhi) + g.d_M, max_o))
    if math.isinf(flo) or math.isinf(fhi):
        raise DomainHoleError("endpoint image is infinite; no finite enclosure")
    _finish(ev, iv, report)
    return FloatInterval(flo, fhi, fmt)
