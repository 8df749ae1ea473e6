"""Exception hierarchy. Every error carries a stable ``name`` used in CLI payloads."""

from __future__ import annotations


class GroupError(Exception):
    """Base class for domain errors raised by ksgroups."""

    @property
    def name(self) -> str:
        return type(self).__name__


class NotAGroup(GroupError):
    def __init__(self, reason: str, witness: tuple[int, ...] | None = None):
        self.reason = reason
        self.witness = witness
        msg = reason if witness is None else f"{reason} (witness {witness})"
        super().__init__(msg)


class NotAPermutation(GroupError):
    pass


class OrderBudgetExceeded(GroupError):
    pass


class SearchBudgetExceeded(GroupError):
    pass


class NotNormal(GroupError):
    pass


class NotAHomomorphism(GroupError):
    def __init__(self, message: str, witness: tuple[int, int] | None = None):
        self.witness = witness
        super().__init__(message if witness is None else f"{message} (witness pair {witness})")


class SourceTargetMismatch(GroupError):
    pass


class PreconditionViolated(GroupError):
    pass


class InternalContradiction(GroupError):
    """A proven statement failed to hold; always indicates a bug."""


class NoAutomorphicSummand(InternalContradiction):
    pass


class NotADecomposition(GroupError):
    pass


class UniquenessViolation(InternalContradiction):
    pass


class NotIsomorphicAmbient(GroupError):
    pass


class CancellationFailure(InternalContradiction):
    pass


class DivisibilityViolated(GroupError):
    pass


class NoCoherentChain(GroupError):
    pass


class ContainmentViolated(GroupError):
    pass


class UnknownName(GroupError):
    pass


class BadParams(GroupError):
    pass


class FormatError(GroupError):
    pass
