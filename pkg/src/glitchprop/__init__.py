"""glitchprop: glitch-aware interval refinement for floating-point functions.

Refines the x-interval of a constraint y = f(x) when f is a machine
implementation of a (quasi-)monotonic or trigonometric real function,
tolerating the bounded monotonicity glitches real libm implementations
have; also surveys implementations to measure those glitches.
"""

from .errors import (ContractError, DbParseError, DomainError,
                     DomainHoleError, GlitchPropError, RangeError)
from .formats import BINARY32, BINARY64, FloatFormat, FloatInterval
from .glitches import (GlitchBounds, GlitchRecord, GlitchSurvey,
                       MonotoneClass, NO_GLITCHES, load_glitch_db,
                       quasi_monotone_split, store_glitch_db, survey_glitches)
from .reduction import (DoubleDouble, PeriodClass, ReductionConfig,
                        div_pio2_up, fp_mult_error_bound, pio2_mult_down,
                        pio2_mult_up, required_precision, worst_case_search)
from .refine import (BoundResult, CallBudgetReport, RefineParams,
                     direct_image, lower_bound, upper_bound)
from .trig import TrigQuery, TrigSubResult, compute_bounds_trig, trig_direct_image

__all__ = [
    "BINARY32", "BINARY64", "FloatFormat", "FloatInterval",
    "GlitchBounds", "GlitchRecord", "GlitchSurvey", "MonotoneClass",
    "NO_GLITCHES", "survey_glitches", "quasi_monotone_split",
    "load_glitch_db", "store_glitch_db",
    "BoundResult", "RefineParams", "CallBudgetReport",
    "upper_bound", "lower_bound", "direct_image",
    "PeriodClass", "ReductionConfig", "DoubleDouble",
    "div_pio2_up", "pio2_mult_down", "pio2_mult_up",
    "required_precision", "fp_mult_error_bound", "worst_case_search",
    "TrigQuery", "TrigSubResult", "compute_bounds_trig", "trig_direct_image",
    "GlitchPropError", "DomainError", "RangeError", "ContractError",
    "DomainHoleError", "DbParseError",
]

__version__ = "1.0.0"
