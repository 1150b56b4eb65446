"""Exception types shared across the toolkit."""


class TagRankError(Exception):
    """Base class for all toolkit errors."""


class ValidationError(TagRankError, ValueError):
    """An input violates a documented precondition or invariant."""


class ParseError(TagRankError):
    """A data file could not be parsed.

    Carries the file path and 1-based line number so callers can point
    users at the offending record.
    """

    def __init__(self, path, line_no, message):
        self.path = str(path)
        self.line_no = line_no
        super().__init__(f"{self.path}:{line_no}: {message}")


class FutureTimestampError(TagRankError):
    """A post is timestamped after the ranking reference time.

    Raised instead of clamping so that inconsistent data is surfaced
    rather than silently absorbed into the scores.
    """
