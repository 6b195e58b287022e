"""Exception hierarchy shared by every module."""


class WienerLabError(ValueError):
    """Base class for all domain errors raised by wiener_lab."""


class NotATree(WienerLabError):
    pass


class BadLabel(WienerLabError):
    pass


class InvalidCaterpillar(WienerLabError):
    pass


class OrderTooLarge(WienerLabError):
    pass


class NotDivisible(WienerLabError):
    pass


class ProbOutOfRange(WienerLabError):
    pass


class NonPositiveCoefficient(WienerLabError):
    pass


class DegreeTooSmall(WienerLabError):
    pass


class NoSignChange(WienerLabError):
    pass


class BadParam(WienerLabError):
    pass


class DomainError(WienerLabError):
    pass


class TargetZero(WienerLabError):
    pass


class BadRange(WienerLabError):
    pass


class NoConvergence(WienerLabError):
    """Root iteration hit its cap. ``report`` holds the partial result."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class BudgetExhausted(WienerLabError):
    """Search ran out of budget. ``best`` holds the closest hit found, if any."""

    def __init__(self, message, best=None):
        super().__init__(message)
        self.best = best


class NotFoundWithinCap(WienerLabError):
    pass


class CensusInterrupted(WienerLabError):
    """Raised when a census stops early on request; its checkpoint file stays resumable."""
