"""Exception hierarchy shared by every module of the package."""


class ChowformsError(Exception):
    """Base class for all library errors."""


class FieldTooSmall(ChowformsError):
    """The prime modulus does not exceed the degree being differentiated."""


class DegreeMismatch(ChowformsError):
    pass


class ProportionalPoints(ChowformsError):
    pass


class ProportionalFactors(ChowformsError):
    pass


class DomainError(ChowformsError):
    pass


class InvalidPoint(ChowformsError):
    pass


class Inconsistent(ChowformsError):
    """A linear system that was required to be solvable has no solution."""


class GenericityFailure(ChowformsError):
    """Every random draw within the retry budget was degenerate."""


class EnumerationTooLarge(ChowformsError):
    pass


class NotZeroDimensional(ChowformsError):
    pass


class SplittingFailure(ChowformsError):
    """The chosen apolar binary form has no splitting into distinct rational roots."""
