"""Exception types shared across the package."""


class TooLargeError(Exception):
    """Input exceeds a materialization or enumeration size cap."""


class Graph6Error(ValueError):
    """Malformed graph6 input. `offset` is the byte position of the fault."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (byte offset {offset})")
        self.offset = offset


class NotATreeError(ValueError):
    """An operation that requires a tree was given a non-tree."""


class NoStemError(ValueError):
    """The stem of a single B-side vertex is undefined."""


class InvariantViolation(Exception):
    """An internal cross-check failed; indicates a bug, not bad input."""
