"""Exception hierarchy shared by all glitchprop modules."""


class GlitchPropError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(GlitchPropError):
    """An argument is outside the operation's domain (NaN, wrong format, ...)."""


class RangeError(GlitchPropError):
    """A result would leave the supported range (finite floats, l_max, ...)."""


class ContractError(GlitchPropError):
    """A documented precondition was violated by the caller."""


class DomainHoleError(GlitchPropError):
    """The function under analysis returned NaN inside the search interval."""


class DbParseError(GlitchPropError):
    """The glitch database file is malformed.

    Carries the offending line number (1-based, 0 for file-level
    problems) so callers can point at the exact spot.
    """

    def __init__(self, lineno: int, message: str):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno
