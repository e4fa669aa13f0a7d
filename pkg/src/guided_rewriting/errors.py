"""Exception hierarchy.

Each family maps onto one CLI exit code, so library callers and the command
line agree on how a failure is classified.
"""


class GuidedRewritingError(Exception):
    exit_code = 1


class ParseError(GuidedRewritingError, ValueError):
    """Malformed system, automaton, regex or string input."""

    exit_code = 2

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        where = []
        if line is not None:
            where.append(f"line {line}")
        if column is not None:
            where.append(f"column {column}")
        if where:
            message = f"{', '.join(where)}: {message}"
        super().__init__(message)


class ValidationError(GuidedRewritingError, ValueError):
    """Well-formed input that violates a precondition."""

    exit_code = 3


class StateCapExceeded(GuidedRewritingError, RuntimeError):
    exit_code = 4


class TheoremInapplicable(GuidedRewritingError, ValueError):
    """The zero-run bound required by the insertion/deletion construction fails."""

    exit_code = 5
