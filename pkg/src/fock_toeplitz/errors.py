"""Exception types raised across the package."""


class FockToeplitzError(ValueError):
    """Base class for all package errors."""


class BasisTooLarge(FockToeplitzError):
    pass


class HypothesisViolation(FockToeplitzError):
    """A nonzero symbol passed to the classifier is not in the Fock space."""


class ConditionGViolation(FockToeplitzError):
    """The symbol grows too fast for the Toeplitz integral to converge."""


class NotInSpace(FockToeplitzError):
    pass


class NoConvergence(FockToeplitzError):
    pass


class DimensionMismatch(FockToeplitzError):
    pass


class GrowthExceedsWeight(FockToeplitzError):
    """The quadrature oracle refuses integrands that outgrow the Gaussian."""


class SymbolParseError(FockToeplitzError):
    pass
