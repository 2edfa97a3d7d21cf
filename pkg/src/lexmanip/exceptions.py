"""Exception and warning types shared across the package."""


class LexmanipError(Exception):
    """Base class for data errors raised by this package."""


class FormatError(LexmanipError, ValueError):
    """A file did not match its expected format.

    ``line`` and ``column`` are 1-based; ``column`` may be None.
    """

    def __init__(self, message, path=None, line=None, column=None):
        self.path = path
        self.line = line
        self.column = column
        where = []
        if path is not None:
            where.append(str(path))
        if line is not None:
            where.append(f"line {line}")
        if column is not None:
            where.append(f"column {column}")
        prefix = ":".join(where)
        super().__init__(f"{prefix}: {message}" if prefix else message)


class InvariantError(LexmanipError, ValueError):
    """A value violates a structural invariant (e.g. a zero edge weight)."""


class AlignmentConflictWarning(UserWarning):
    """Non one-to-one alignment links were dropped while reading."""


class TreeSkippedWarning(UserWarning):
    """A malformed treebank sentence was skipped."""
