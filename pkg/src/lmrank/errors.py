"""Exception hierarchy shared by the library and the CLI."""


class LmrankError(Exception):
    """Base class for all errors raised by lmrank."""


class ConfigError(LmrankError):
    """Bad configuration or command-line usage."""


class InputFormatError(LmrankError):
    """An input file could not be parsed."""

    def __init__(self, message, path=None, line_no=None):
        self.path = path
        self.line_no = line_no
        where = ""
        if path is not None:
            where = f"{path}:"
            if line_no is not None:
                where += f"{line_no}:"
            where += " "
        elif line_no is not None:
            where = f"line {line_no}: "
        super().__init__(where + message)


class ConsistencyError(LmrankError):
    """Inputs parse fine but do not agree with each other."""


class InvalidOrderError(LmrankError, ValueError):
    """N-gram order outside {1, 2, 3}."""


class EmptyModelError(LmrankError):
    """Probability requested from a model with no tokens."""


class ValidationError(LmrankError, ValueError):
    """A domain value violates its invariants."""
