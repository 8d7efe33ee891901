"""Exception hierarchy. Every error is also a ``ValueError`` so callers that
only care about bad input can catch that."""


class LabError(ValueError):
    pass


class BadParams(LabError):
    """Exponents or other numeric parameters outside their admissible range."""


class InstanceTooLarge(LabError):
    """Requested enumeration exceeds the configured size cap."""


class MalformedSubset(LabError):
    """Coordinate subsets that overlap, leave gaps, or fall outside 1..m."""


class EmptyInput(LabError):
    pass


class SymmetryViolation(LabError):
    """A tensor passed as symmetric is not invariant under index permutation."""


class WeightDomainError(LabError):
    """A weight is missing (or non-positive) on the support of a sequence."""


class DomainError(LabError):
    pass


class MalformedPartition(LabError):
    pass
