"""Exception types shared across the package."""


class DimrelError(Exception):
    """Base class for all package errors."""


class InvalidInput(DimrelError, ValueError):
    """Input data violates a precondition (shape, finiteness, membership)."""


class ConfigError(DimrelError, ValueError):
    """A configuration or scorer setup is unusable."""


class EmptyAnalysis(DimrelError):
    """Nothing eligible to evaluate or analyze."""


class IngestError(InvalidInput):
    """A session log line could not be parsed.

    ``line`` is the 1-based line number in the source file, when known.
    """

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
