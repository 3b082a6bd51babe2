"""Typed error hierarchy.

Validation-style errors (bad user input, infeasible configuration) derive from
``ValidationError`` so the CLI can map them to exit code 1; anything else is a
runtime failure (exit code 2).
"""


class StrucRecError(Exception):
    pass


class ValidationError(StrucRecError, ValueError):
    """Invalid input or configuration supplied by the caller."""


class DimensionError(ValidationError):
    pass


class InvalidRadiusError(ValidationError):
    pass


class InvalidBudgetError(ValidationError):
    pass


class UnsupportedKindError(ValidationError):
    pass


class DegenerateSignalError(ValidationError):
    pass


class InsufficientSamplesError(ValidationError):
    pass


class ConfigurationError(ValidationError):
    pass


class SampleBudgetError(ValidationError):
    """Measurement budget below the theorem threshold (rate >= 1)."""


class AdmissibilityError(ValidationError):
    """Bound parameters outside the admissible range of the result."""


class InfeasibleTargetError(ValidationError):
    """Accuracy target unreachable at any number of measurements."""
