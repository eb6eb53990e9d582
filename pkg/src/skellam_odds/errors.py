"""Exception types shared across the package."""


class SkellamOddsError(Exception):
    """Base class for package errors."""


class DomainError(SkellamOddsError, ValueError):
    """An argument lies outside the domain of the operation."""


class DegenerateInputError(SkellamOddsError, ValueError):
    """Inputs are valid individually but leave nothing to compute with."""


class InputFormatError(SkellamOddsError, ValueError):
    """A data file could not be parsed; carries the file and line."""

    def __init__(self, message: str, path=None, line: int | None = None):
        self.path = path
        self.line = line
        where = ""
        if path is not None:
            where = f"{path}:{line}: " if line is not None else f"{path}: "
        super().__init__(where + message)


class TimelineError(SkellamOddsError, ValueError):
    """Snapshot sequence is out of order; ``index`` names the offending snapshot."""

    def __init__(self, message: str, index: int):
        self.index = index
        super().__init__(f"snapshot {index}: {message}")
