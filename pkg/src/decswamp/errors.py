"""Exception hierarchy.

Every error raised on bad domain input derives from :class:`DomainError`;
the CLI maps it to exit code 3.
"""


class DomainError(ValueError):
    pass


class DimensionMismatch(DomainError):
    pass


class NonAscendingChain(DomainError):
    pass


class NonPositiveWeight(DomainError):
    pass


class NonAscendingWeights(DomainError):
    pass


class ZeroFunctional(DomainError):
    pass


class ZeroForm(ZeroFunctional):
    pass


class LengthMismatch(DomainError):
    pass


class EmptyCandidates(DomainError):
    pass


class NoSplitModel(DomainError):
    pass


class UnrealizableDegree(DomainError):
    pass


class H0Unavailable(DomainError):
    pass


class NonPositiveEta(DomainError):
    pass


class EmptySupport(DomainError):
    pass


class InconsistentH0(DomainError):
    pass


class InadmissibleWeights(DomainError):
    pass


class RelationViolated(DomainError):
    pass


class ZeroComponent(DomainError):
    pass


class ZeroScalar(DomainError):
    pass


class NonIsomorphismV(DomainError):
    pass


class OutOfRange(DomainError):
    pass
