"""Exception types shared across the package."""


class ValidationError(ValueError):
    """A precondition or input validation check failed."""


class NotSteinerError(ValidationError):
    """The evaluation map drops rank at ``witness``."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class InjectivityError(ValidationError):
    """Multiplication by the section ``witness`` is not injective."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class BudgetExceeded(RuntimeError):
    """A projective enumeration would exceed the configured point budget."""


class SamplerExhausted(RuntimeError):
    """Rejection sampling gave up before finding an admissible sample."""


class InvariantViolation(AssertionError):
    """An internal consistency check failed; this indicates a library bug."""
