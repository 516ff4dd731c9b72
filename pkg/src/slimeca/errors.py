class SlimecaError(Exception):
    """Base class for all package errors."""


class ConfigurationError(SlimecaError, ValueError):
    """Invalid geometry, configuration or run setup."""


class MazeParseError(ConfigurationError):
    def __init__(self, message, row=None, col=None):
        where = ""
        if row is not None:
            where = f" (row {row}" + (f", column {col})" if col is not None else ")")
        super().__init__(message + where)
        self.row = row
        self.col = col


class UnknownCharacterError(MazeParseError):
    pass


class RaggedRowsError(MazeParseError):
    pass


class MissingMarkerError(MazeParseError):
    def __init__(self, missing):
        self.missing = tuple(missing)
        super().__init__("missing marker(s): " + ", ".join(self.missing))


class DuplicateMarkerError(MazeParseError):
    pass


class IsolatedInputError(MazeParseError):
    pass


class ConfigParseError(ConfigurationError):
    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class ContractViolation(SlimecaError):
    """A simulation invariant was broken at run time."""
