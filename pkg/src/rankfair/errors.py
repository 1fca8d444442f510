"""Exception and warning types shared across the package."""


class RankfairError(Exception):
    """Base class for every error raised by this package."""


class EmptyClass(RankfairError):
    """A metric denominator is zero: a required positive/negative class is absent."""


class EmptyGroup(RankfairError):
    """A group contains no samples at all."""


class EmptyMapping(RankfairError):
    """A score mapping without knots cannot transfer anything."""


class CapacityExceeded(RankfairError):
    """A computation would exceed its configured size budget."""


class ParseError(RankfairError):
    """A CSV row or header could not be parsed.

    Carries the physical line number, the offending column name, and a reason.
    """

    def __init__(self, line: int, column: str, reason: str):
        super().__init__(f"line {line}, column {column!r}: {reason}")
        self.line = line
        self.column = column
        self.reason = reason


class GroupCountError(RankfairError):
    """Input data does not contain exactly two distinct group tags."""


class ConfigError(RankfairError):
    """Invalid run configuration: bad lambda grid, bad synthesis parameters, bad flags."""


class DegenerateAnchorWarning(UserWarning):
    """Adjacent anchor scores are tied; enclosed samples get epsilon-spaced scores."""


class DegenerateSegmentWarning(UserWarning):
    """A transfer lookup hit repeated training scores; mapped to the midpoint."""


class ScoreRangeWarning(UserWarning):
    """Scores fall outside [0, 1]; metrics only use the ordering, so this is allowed."""
