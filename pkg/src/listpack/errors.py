"""Exception types raised across the package."""


class ListpackError(Exception):
    pass


class DomainError(ListpackError, ValueError):
    """An argument lies outside the region where a formula is defined."""


class NoSignChange(ListpackError, ValueError):
    """A root bracket does not straddle a sign change."""


class NonFinite(ListpackError, ArithmeticError):
    """An objective returned nan or inf at a probed point."""


class TooLarge(ListpackError, ValueError):
    """An enumeration would exceed its size guard."""


class DegenerateInput(ListpackError, ValueError):
    """Point data contains non-finite coordinates or inconsistent shapes."""


class SigmaUndefined(DomainError):
    """The noise threshold needs L(P - N) > P."""


class WindowTooLarge(ListpackError, ValueError):
    """A tiling window would produce too many points."""


class InsufficientErrors(ListpackError, RuntimeError):
    """A Monte Carlo run saw too few error events for a usable log estimate."""

    def __init__(self, message, estimate=None):
        super().__init__(message)
        self.estimate = estimate
