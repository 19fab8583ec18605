"""Exception types shared across the package."""


class RetrovoteError(Exception):
    """Base class for every error this package raises on purpose."""


class InvalidConfig(RetrovoteError):
    """A simulation config violates one of its invariants."""

    def __init__(self, invariant, message=None):
        super().__init__(message or invariant)
        self.invariant = invariant


class DimensionMismatch(RetrovoteError):
    """Matrix or vector dimensions do not agree."""


class DegenerateRow(RetrovoteError):
    """A preference row sums to zero, so it cannot be normalized."""


class ParseError(RetrovoteError):
    """A preference file is malformed."""


class NegativeEntry(RetrovoteError):
    """A preference file contains a negative value."""


class EmptyMatrix(RetrovoteError):
    """An aggregation was asked to score an empty allocation matrix."""


class DegenerateScores(RetrovoteError):
    """All mechanism scores are zero, so funding shares are undefined."""


class DegenerateDistribution(RetrovoteError):
    """A vote distribution sums to zero, so percentages are undefined."""


class InfeasibleEpsilon(RetrovoteError):
    """The epsilon strategy does not fit inside the attacker's budget."""


class TooFewColluders(RetrovoteError):
    """A project attack needs at least two colluding projects."""


class NotEnoughVoters(RetrovoteError):
    """The requested attacker coalition exceeds the available voters."""


class NotEnoughProjects(RetrovoteError):
    """The requested colluding group exceeds the available projects."""


class IterationFailed(RetrovoteError):
    """One Monte Carlo iteration hit a degenerate-input error."""

    def __init__(self, index, message=""):
        super().__init__(f"iteration {index} failed: {message}")
        self.index = index
        self.message = message

    def __reduce__(self):
        # keep (index, message) through pickling across worker processes
        return (IterationFailed, (self.index, self.message))


class SimulationFailed(RetrovoteError):
    """More than the tolerated share of iterations failed."""
