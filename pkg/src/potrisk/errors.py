"""Exception hierarchy for the potrisk package.

Everything raised on purpose derives from PotriskError. ValidationError
covers bad inputs or data conditions the caller can fix (CLI exit code 2);
anything else escaping to the CLI is treated as an internal error (exit 1).
"""


class PotriskError(Exception):
    """Base class for all potrisk errors."""


class ValidationError(PotriskError):
    """Invalid input data, configuration, or preconditions."""


# -- series -----------------------------------------------------------------

class TooFewObservations(ValidationError):
    pass


class ZeroDenominator(ValidationError):
    pass


class OverlappingRanges(ValidationError):
    pass


class EmptyPeriodWarning(UserWarning):
    """A period range captured zero returns (warning at library level)."""


class EmptyPeriodError(ValidationError):
    """A period range captured zero returns (fatal in the CLI pipeline)."""


# -- gpd --------------------------------------------------------------------

class InvalidParams(ValidationError):
    pass


class InvalidProbability(ValidationError):
    pass


class TooFewExceedances(ValidationError):
    pass


class DegenerateSample(ValidationError):
    pass


class NonConvergence(PotriskError):
    """The likelihood optimizer produced no usable optimum."""


# -- gof --------------------------------------------------------------------

class EmptySample(ValidationError):
    pass


class BoundaryValue(ValidationError):
    pass


# -- excess -----------------------------------------------------------------

class NoExceedances(ValidationError):
    pass


# -- risk -------------------------------------------------------------------

class InvalidCounts(ValidationError):
    pass


class ShapeAtOrAboveOne(ValidationError):
    """Expected shortfall is undefined: the excess mean diverges."""


class NoSurvivingCandidates(PotriskError):
    pass


class NotApplicable(PotriskError):
    pass


class UnknownAlphaLevel(ValidationError):
    pass
