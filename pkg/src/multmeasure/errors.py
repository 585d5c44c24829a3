"""Exception hierarchy shared by every module of the package."""

from __future__ import annotations


class MeasureError(Exception):
    """Base class for all errors raised by :mod:`multmeasure`."""


class FactorBelowOne(MeasureError, ValueError):
    """A product factor (or a would-be value of ``[1, inf]``) is below 1."""


class InvalidPermutation(MeasureError, ValueError):
    """A rearrangement rule is not injective (or leaves the index set)."""


class EpsilonOutOfRange(MeasureError, ValueError):
    pass


class DomainError(MeasureError, ValueError):
    """An interval or parameter violates its domain invariants."""


class NonRepresentableBound(MeasureError, ValueError):
    """A log-space bound has no exact rational image under ``exp``."""


class NotACover(MeasureError, ValueError):
    pass


class InfiniteMeasure(MeasureError, ValueError):
    pass


class NotSeparated(MeasureError, ValueError):
    pass


class NotDisjoint(MeasureError, ValueError):
    """Two members of a generator family intersect."""

    def __init__(self, i: int, j: int):
        super().__init__(f"family members {i} and {j} are not disjoint")
        self.indices = (i, j)


class ToleranceNotMet(MeasureError, ArithmeticError):
    pass


class ParameterOrder(DomainError):
    pass
