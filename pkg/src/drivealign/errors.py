"""Exception taxonomy shared across the package."""


class DriveAlignError(Exception):
    """Base class for all package-specific errors."""


class DimensionError(DriveAlignError, ValueError):
    """Shape or extent mismatch between operands."""


class ContractError(DriveAlignError, ValueError):
    """A documented precondition or interface contract was violated."""


class DegenerateInputError(DriveAlignError, ValueError):
    """An input is mathematically degenerate (zero norm, empty token set, ...)."""


class TrainingDivergenceError(DriveAlignError, RuntimeError):
    """Non-finite values appeared during optimization."""


class GenerationError(DriveAlignError, RuntimeError):
    """Scenario or episode generation could not satisfy its constraints."""


class AnnotationError(DriveAlignError, RuntimeError):
    """The annotation backend failed after exhausting retries."""

    def __init__(self, message: str, stage: str | None = None, status: int | None = None):
        super().__init__(message)
        self.stage = stage
        self.status = status


class ProtocolError(DriveAlignError, RuntimeError):
    """A remote backend returned a malformed response body."""


class ConfigError(DriveAlignError, ValueError):
    """Invalid or unknown configuration content."""


class DataError(DriveAlignError, RuntimeError):
    """Dataset files are missing, corrupt, or inconsistent."""
