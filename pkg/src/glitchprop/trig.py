"""Inverse propagation for periodic functions.

`compute_bounds_trig` splits the queried x-interval into at most g
sub-intervals aligned with the quasi-monotonic branches of the function
(branch boundaries are the float neighbors of the tonicity-change
multiples of pi/2) and refines each side of each sub-interval with the
core engine, negating the function on antitonic branches. Statuses of
multi-branch sub-intervals are coerced so their guarantees survive the
later widening of the sub-interval (a "no solution" verdict for one
branch must not speak for branches that were never looked at).

The y query is an interval [y_l, y_u]: lower bounds refine against y_l
and upper bounds against y_u, swapped under negation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

from .errors import ContractError, DomainError, RangeError
from .formats import FloatInterval
from .glitches import GlitchBounds, MonotoneClass, quasi_monotone_split
from .reduction import (PeriodClass, ReductionConfig, div_pio2_up,
                        geq_tonicity_change, pio2_mult_down, pio2_mult_up,
                        quasi_isotonic)
from .refine import (CallBudgetReport, RefineParams, _Evaluator, direct_image,
                     lower_bound, upper_bound)

__all__ = [
    "PeriodClass",
    "TrigSubResult",
    "TrigQuery",
    "geq_tonicity_change",
    "quasi_isotonic",
    "branch_lb",
    "branch_ub",
    "compute_bounds_trig",
    "trig_direct_image",
]


@dataclass(frozen=True)
class TrigSubResult:
    """One refined sub-interval: bounds l/u with their status codes and
    the branch index k of the branch its outer refinements ran in."""

    x_lo: float
    x_hi: float
    l: float
    u: float
    r_l: int
    r_u: int
    k: int


@dataclass(frozen=True)
class TrigQuery:
    f: Callable[[float], float]
    f_inv: Callable[[float], float]
    pclass: PeriodClass
    y: FloatInterval
    x: FloatInterval
    glitch: GlitchBounds  # per-branch bounds, uniform over all branches
    g: int
    s: int
    t: int
    cfg: Optional[ReductionConfig] = None

    def __post_init__(self):
        if self.g < 1:
            raise DomainError("g must be at least 1")
        if self.s < 0 or self.t < 0:
            raise DomainError("s and t must be nonnegative")


def _neg_of(f):
    def nf(x: float) -> float:
        return -float(f(x))
    return nf


def _inv_negated(f_inv):
    def ni(y: float) -> float:
        return float(f_inv(-y))
    return ni


def _check_single_branch(branch: FloatInterval, k: int, cfg: ReductionConfig):
    fmt = branch.fmt
    if fmt.lt(branch.lo, pio2_mult_up(k - 2, cfg)) or \
       fmt.lt(pio2_mult_down(k, cfg), branch.hi):
        raise ContractError(
            f"interval [{branch.lo!r}, {branch.hi!r}] straddles a tonicity "
            f"change (branch k={k})")


def branch_lb(f, f_inv, p: PeriodClass, y: FloatInterval,
              branch: FloatInterval, k: int, glitch: GlitchBounds,
              s: int, t: int, cfg: Optional[ReductionConfig] = None):
    """Refine the lower bound over one quasi-monotonic branch.

    Glitch data is clamped to the branch (and dropped when disjoint from
    it); antitonic branches delegate to the core on -f with -y_u.
    Returns (l, r_l) with r_l in {0..4}.
    """
    if cfg is None:
        cfg = ReductionConfig.for_format(branch.fmt)
    _check_single_branch(branch, k, cfg)
    sub = glitch.clamped_to(branch)
    if quasi_isotonic(k, p):
        res = lower_bound(f, y.lo, branch, RefineParams(sub, s, t, f_inv))
    else:
        res = lower_bound(_neg_of(f), -y.hi, branch,
                          RefineParams(sub, s, t, _inv_negated(f_inv)))
    return res.value, res.status


def branch_ub(f, f_inv, p: PeriodClass, y: FloatInterval,
              branch: FloatInterval, k: int, glitch: GlitchBounds,
              s: int, t: int, cfg: Optional[ReductionConfig] = None):
    """Mirror of branch_lb; returns (u, r_u) with r_u in {5..9}."""
    if cfg is None:
        cfg = ReductionConfig.for_format(branch.fmt)
    _check_single_branch(branch, k, cfg)
    sub = glitch.clamped_to(branch)
    if quasi_isotonic(k, p):
        res = upper_bound(f, y.hi, branch, RefineParams(sub, s, t, f_inv))
    else:
        res = upper_bound(_neg_of(f), -y.lo, branch,
                          RefineParams(sub, s, t, _inv_negated(f_inv)))
    return res.value, res.status


def compute_bounds_trig(q: TrigQuery,
                        report: Optional[CallBudgetReport] = None
                        ) -> list[TrigSubResult]:
    """Split q.x into at most q.g sub-intervals and refine each side.

    The sub-intervals are contiguous and tile q.x exactly. The center
    pivot branch is k_c = 0 for the even class and -1 otherwise; when
    the query straddles the pivot the budget splits as floor(g/2) to the
    left and the rest to the right; with g = 1 the whole query collapses
    to a single sub-interval refined only in its outermost branches.
    """
    fmt = q.x.fmt
    cfg = q.cfg if q.cfg is not None else ReductionConfig.for_format(fmt)
    if abs(q.x.lo) > cfg.l_max or abs(q.x.hi) > cfg.l_max:
        raise RangeError("query interval exceeds l_max")
    q.glitch.require_for(q.x)

    ev = _Evaluator(q.f, fmt)
    x_l, x_u = q.x.lo, q.x.hi
    p = q.pclass

    def b_lb(lo, hi, k):
        return branch_lb(ev, q.f_inv, p, q.y, FloatInterval(lo, hi, fmt), k,
                         q.glitch, q.s, q.t, cfg)

    def b_ub(lo, hi, k):
        return branch_ub(ev, q.f_inv, p, q.y, FloatInterval(lo, hi, fmt), k,
                         q.glitch, q.s, q.t, cfg)

    k_l = geq_tonicity_change(p, div_pio2_up(x_l, cfg))
    k_u = geq_tonicity_change(p, div_pio2_up(x_u, cfg))
    k_c = 0 if p is PeriodClass.EVEN_V else -1

    if q.g == 1:
        g_l, g_r = 1, 0
        k_c = k_u
    elif fmt.le(x_u, pio2_mult_down(k_c, cfg)):
        g_l, g_r = q.g, 0
    elif fmt.le(pio2_mult_up(k_c, cfg), x_l):
        g_l, g_r = 0, q.g
    else:
        g_l = q.g // 2
        g_r = q.g - g_l

    out: list[TrigSubResult] = []

    if g_l > 0:
        i_x_l = x_l
        i_x_u = fmt.fmin(x_u, pio2_mult_down(k_l, cfg))
        l, r_l = b_lb(i_x_l, i_x_u, k_l)
        k_lu = min(k_u, k_c)
        ik = max(k_l, k_lu - 2 * (g_l - 1))
        if r_l == 0 and k_l < ik:
            # leftmost sub-interval spans several branches: "no solution"
            # holds only for the branch just searched
            l, r_l = i_x_u, 2
        c_xl = fmt.fmax(x_l, pio2_mult_up(ik - 2, cfg))
        i_x_u = fmt.fmin(x_u, pio2_mult_down(ik, cfg))
        u, r_u = b_ub(c_xl, i_x_u, ik)
        if r_u == 5 and k_l < ik:
            u, r_u = i_x_l, 7
        out.append(TrigSubResult(i_x_l, i_x_u, l, u, r_l, r_u, ik))
        ik += 2
        while ik <= k_lu:
            i_x_l = fmt.succ(i_x_u)
            i_x_u = fmt.fmin(pio2_mult_down(ik, cfg), x_u)
            l, r_l = b_lb(i_x_l, i_x_u, ik)
            u, r_u = b_ub(i_x_l, i_x_u, ik)
            out.append(TrigSubResult(i_x_l, i_x_u, l, u, r_l, r_u, ik))
            ik += 2

    if g_r > 0:
        ik = max(k_l, k_c + 2)
        i_x_u = fmt.fmax(fmt.pred(x_l), pio2_mult_down(ik - 2, cfg))
        while ik < k_u and g_r > 1:
            i_x_l = fmt.succ(i_x_u)
            i_x_u = fmt.fmin(x_u, pio2_mult_down(ik, cfg))
            l, r_l = b_lb(i_x_l, i_x_u, ik)
            u, r_u = b_ub(i_x_l, i_x_u, ik)
            out.append(TrigSubResult(i_x_l, i_x_u, l, u, r_l, r_u, ik))
            ik += 2
            g_r -= 1
        i_x_l = fmt.succ(i_x_u)
        i_x_u = fmt.fmin(x_u, pio2_mult_down(ik, cfg))
        l, r_l = b_lb(i_x_l, i_x_u, ik)
        if r_l == 0 and ik < k_u:
            l, r_l = i_x_u, 2
        c_xl = fmt.fmax(x_l, pio2_mult_up(k_u - 2, cfg))
        i_x_u = x_u
        u, r_u = b_ub(c_xl, i_x_u, k_u)
        if r_u == 5 and ik < k_u:
            u, r_u = c_xl, 7
        out.append(TrigSubResult(i_x_l, i_x_u, l, u, r_l, r_u, ik))

    assert len(out) <= q.g
    if report is not None:
        report.f_calls = ev.calls
        report.interval_size = q.x.count
    return out


def trig_direct_image(f, pclass: PeriodClass, iv: FloatInterval,
                      glitch: GlitchBounds,
                      cfg: Optional[ReductionConfig] = None,
                      report: Optional[CallBudgetReport] = None
                      ) -> FloatInterval:
    """Enclosure of {f(x) : x in iv}: the hull of the per-branch images."""
    fmt = iv.fmt
    ev = _Evaluator(f, fmt)
    lo = hi = None
    for piece, cls in quasi_monotone_split(pclass, iv, cfg):
        img = direct_image(ev, piece, glitch.clamped_to(piece), cls)
        lo = img.lo if lo is None else fmt.fmin(lo, img.lo)
        hi = img.hi if hi is None else fmt.fmax(hi, img.hi)
    if report is not None:
        report.f_calls = ev.calls
        report.interval_size = iv.count
    return FloatInterval(lo, hi, fmt)
