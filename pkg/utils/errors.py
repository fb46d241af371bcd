"""Exception hierarchy shared by every package, with the CLI exit codes they map to."""

EXIT_OK = 0
EXIT_IO = 1
EXIT_PARTIAL = 2
EXIT_MISSING = 3
EXIT_METADATA = 4


class MinkError(Exception):
    """Base class for all errors raised by this project."""

    exit_code = EXIT_IO


class DomainError(MinkError, ValueError):
    """An argument lies outside the domain of the operation."""


class DataError(MinkError, ValueError):
    """Input data violates a structural requirement (ordering, positivity, size)."""


class EvaluationError(DataError):
    """A user-supplied function returned a non-finite value."""


class SolverError(MinkError, RuntimeError):
    """A linear system could not be solved to working accuracy."""

    def __init__(self, message: str, condition_estimate: float = float("inf")):
        super().__init__(f"{message} (condition estimate {condition_estimate:.3e})")
        self.condition_estimate = condition_estimate


class ResourceError(MinkError, RuntimeError):
    """The requested computation exceeds a configured size cap."""


class CacheMissingError(MinkError, FileNotFoundError):
    """The Jacobi cache does not exist or is too small for the request."""

    exit_code = EXIT_MISSING


class CacheFormatError(MinkError, ValueError):
    """The Jacobi cache file cannot be parsed."""

    exit_code = EXIT_METADATA

    def __init__(self, message: str, lineno: int):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


class CacheMetadataError(MinkError, ValueError):
    """The cache header disagrees with its rows or with this version's format."""

    exit_code = EXIT_METADATA
