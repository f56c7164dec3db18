"""Exception hierarchy shared by every module of the package."""

from __future__ import annotations


class SpernerEqError(Exception):
    """Base class for all package errors."""


class NegativeCoordinate(SpernerEqError, ValueError):
    pass


class NotNormalized(SpernerEqError, ValueError):
    pass


class ResolutionZero(SpernerEqError, ValueError):
    pass


class CellOutOfRange(SpernerEqError, ValueError):
    pass


class MapLeavesSimplex(SpernerEqError, ValueError):
    pass


class MissingLabel(SpernerEqError, ValueError):
    pass


class ImproperLabeling(SpernerEqError, ValueError):
    """Raised with the full violation list attached."""

    def __init__(self, violations):
        self.violations = list(violations)
        head = "; ".join(str(v) for v in self.violations[:3])
        more = "" if len(self.violations) <= 3 else f" (+{len(self.violations) - 3} more)"
        super().__init__(f"improper labeling: {head}{more}")


class AllZeroPrices(SpernerEqError, ValueError):
    pass


class ZeroPriceSingular(SpernerEqError, ArithmeticError):
    pass


class WalrasViolation(SpernerEqError, ValueError):
    pass


class LabelingFailed(SpernerEqError, RuntimeError):
    pass


class NotFullyLabeled(SpernerEqError, AssertionError):
    """The equilibrium landed outside every fully labeled cell (a bug signal)."""


class ConfigError(SpernerEqError, ValueError):
    pass


class NotConverged(SpernerEqError, RuntimeError):
    """The refinement schedule ended before the stopping rule held."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report
