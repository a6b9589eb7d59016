# src/steinerminor/core/exceptions.py

from typing import Any, Optional


class SteinerMinorError(Exception):
    """Base class for every error raised by steinerminor."""


class InputError(SteinerMinorError, ValueError):
    """Invalid vertex ids, empty terminal sets, non-total assignments."""


class GraphFormatError(InputError):
    def __init__(self, message: str, line_number: Optional[int] = None):
        self.line_number = line_number
        if line_number is not None:
            message = f"line {line_number}: {message}"
        super().__init__(message)


class SpecError(InputError):
    """Invalid instance description (unknown family, k > n, ...)."""


class ConfigError(SteinerMinorError, ValueError):
    pass


class MinorValidityError(SteinerMinorError):
    def __init__(self, message: str, witness: Any = None):
        self.witness = witness
        super().__init__(message)


class ProviderError(SteinerMinorError, RuntimeError):
    pass


class ScatterInfeasibleError(SteinerMinorError, RuntimeError):
    pass


class LevelAssignmentError(SteinerMinorError, RuntimeError):
    def __init__(self, message: str, witness: Any = None):
        self.witness = witness
        super().__init__(message)


class NonTerminationError(SteinerMinorError, RuntimeError):
    pass


class InvariantError(SteinerMinorError, RuntimeError):
    def __init__(self, message: str, witnesses: Any = None):
        self.witnesses = witnesses
        super().__init__(message)


class StructuralError(SteinerMinorError, RuntimeError):
    pass
