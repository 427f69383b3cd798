"""Exception types and process exit codes shared across the package."""


class NestcircError(Exception):
    """Base class for all errors this package raises deliberately."""


class ParseError(NestcircError):
    """Malformed input text.

    Carries a 1-based line/column position when available.
    """

    def __init__(self, message: str, line: int | None = None, col: int | None = None):
        self.line = line
        self.col = col
        if line is not None:
            message = f"{line}:{col}: {message}"
        super().__init__(message)


class SemanticError(NestcircError):
    """Well-formed input that violates a side condition.

    Examples: overlapping minimized/floating lists, an abnormality letter in a
    query conclusion, a non-Horn theory handed to a Horn-only procedure.
    """


class CapExceeded(NestcircError):
    """An exhaustive enumeration would exceed the configured atom cap."""


class VerifyFailed(NestcircError):
    """Two evaluation strategies disagreed on the same query.

    This is always a bug; the message names both strategies and their
    answers so the failure is reproducible.
    """


# Process exit codes used by the command line interface.
EXIT_YES = 0
EXIT_NO = 1
EXIT_PARSE = 2
EXIT_SEMANTIC = 3
EXIT_CAP = 4
