"""Exception hierarchy shared by every module of the package."""

from __future__ import annotations


class TSystemError(Exception):
    """Base class for all package errors."""


class ScopeError(TSystemError):
    """An instance lies outside the region where the solvers are valid."""


class InternalError(TSystemError):
    """An internal invariant failed; the inputs were fine but the code is not."""


class NotDivisible(InternalError):
    pass


class ResidualTail(InternalError):
    pass


class MissingScheme(TSystemError):
    def __init__(self, site):
        super().__init__(f"coefficient scheme has no value for c{list(site)}")
        self.site = site


class NegativeCoefficient(TSystemError):
    pass


class NotTFree(TSystemError):
    pass


class InvalidSurface(TSystemError):
    def __init__(self, message, site=None):
        super().__init__(message)
        self.site = site


class NotMutable(TSystemError):
    pass


class PointBelowSurface(ScopeError):
    pass


class ScopeViolation(ScopeError):
    pass


class InvalidNeighborHeights(TSystemError):
    pass


class DegenerateShadow(TSystemError):
    pass


class InconsistentRow(InternalError):
    pass


class UnbalancedColumn(InternalError):
    pass


class NotAPathFamily(InternalError):
    pass


class NotPerfect(InternalError):
    pass


class UnrecognizedLocalPattern(InternalError):
    pass


class InvalidKappa(TSystemError):
    pass


class SiteNotLocated(TSystemError):
    pass


class UnsupportedSurface(ScopeError):
    """Specialisation is only defined over the fundamental surface."""
