"""Exception hierarchy shared by every module of the package."""

from __future__ import annotations


class RingUnitsError(Exception):
    """Base class for all errors raised by ringunits."""


# ring core

class AxiomViolation(RingUnitsError, ValueError):
    """A structure-constant table does not define a commutative unital ring.

    ``kind`` is one of ``"associativity"``, ``"commutativity"``, ``"unity"``,
    ``"order-compatibility"`` or ``"shape"``; ``where`` holds the offending
    basis indices.
    """

    def __init__(self, kind: str, where: tuple, detail: str = ""):
        self.kind = kind
        self.where = where
        msg = f"{kind} violated at basis indices {where}"
        if detail:
            msg += f": {detail}"
        super().__init__(msg)


class DimensionMismatch(RingUnitsError, ValueError):
    pass


class NotLocal(RingUnitsError, ValueError):
    pass


class NotPrimePower(RingUnitsError, ValueError):
    pass


class TooLarge(RingUnitsError):
    """The requested object exceeds the configured desk-scale cardinality cap."""


class TheoremViolation(RingUnitsError):
    """A structural identity failed on a ring that passed validation.

    This never triggers on a correctly validated ring; seeing it means a bug.
    """


# builders

class BuilderError(RingUnitsError, ValueError):
    pass


class PIsTwo(BuilderError):
    pass


class PartitionPrimeMismatch(BuilderError):
    pass


class ExponentTooLarge(BuilderError):
    pass


class PTooLargeForDeskScale(BuilderError, TooLarge):
    pass


class A0TooSmall(BuilderError):
    pass


# groups

class GroupError(RingUnitsError, ValueError):
    pass


class ZeroOrder(GroupError):
    pass


class GroupSyntaxError(GroupError):
    pass


class QNotPrimePower(GroupError, NotPrimePower):
    pass


class NotAbelianDetected(GroupError):
    pass


# analyzer / realizability

class NotGaloisRing(RingUnitsError, ValueError):
    pass


class HNotPGroup(RingUnitsError, ValueError):
    pass


class OrderTooLarge(TooLarge):
    pass


class EvenOrder(RingUnitsError, ValueError):
    pass
