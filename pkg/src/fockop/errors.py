"""Exception types shared across the package."""


class FockError(Exception):
    """Base class for all package errors."""


class ParameterError(FockError, ValueError):
    """An argument is outside its documented domain."""


class EvaluationError(FockError, ArithmeticError):
    """A numerical evaluation produced a non-finite value or would overflow."""

    def __init__(self, message, point=None):
        super().__init__(message)
        self.point = point


class DomainError(EvaluationError):
    """Evaluation requested at a point where the method is not reliable."""


class ConvergenceError(FockError, RuntimeError):
    """An iterative method failed to meet its tolerance."""

    def __init__(self, message, last=None):
        super().__init__(message)
        self.last = last
