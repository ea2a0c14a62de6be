"""Exception hierarchy shared by all modules."""


class BeliefPolarError(ValueError):
    """Base class for every error raised by this package."""


class ShapeError(BeliefPolarError):
    """Belief vector and influence matrix dimensions disagree."""


class ParameterError(BeliefPolarError):
    """A numeric parameter is outside its admissible range."""


class InvalidSizeError(ParameterError):
    """Agent count is not valid for the requested construction."""


class InvalidPathError(BeliefPolarError):
    """Influence path repeats an agent or is too short."""


class NotAPathError(InvalidPathError):
    """Two consecutive agents on a path have zero direct influence."""


class PreconditionError(BeliefPolarError):
    """A checker was applied outside the hypotheses of its result."""
