"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside an operation's mathematical domain."""


class NotAnIdealError(ValueError):
    """A module pair does not span a fractional ideal of the CM-field."""


class InconclusiveSearch(RuntimeError):
    """A bounded search ended without a decision.

    Distinct from a definitive negative answer: the caller may escalate the
    bound and retry.
    """


class IncompleteEnumeration(RuntimeError):
    """Ideal enumeration hit its norm bound before certifying completeness."""

    def __init__(self, message, found=None):
        super().__init__(message)
        self.found = found


class UnsupportedGaloisData(ValueError):
    """Galois data outside the desk-scale cases this package realizes."""
