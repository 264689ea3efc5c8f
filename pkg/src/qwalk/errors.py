"""Exception types shared across the package."""


class QwalkError(Exception):
    """Base class for all package errors."""


class ParameterError(QwalkError, ValueError):
    """An input violates a documented precondition."""


class GenerationError(QwalkError, RuntimeError):
    """A random-graph generator gave up after exhausting its retry budget."""

    def __init__(self, message: str, attempts: int):
        super().__init__(f"{message} (after {attempts} attempts)")
        self.attempts = attempts


class NumericalError(QwalkError, ArithmeticError):
    """An iterative or quadrature routine failed to reach its accuracy target."""

    def __init__(self, message: str, achieved: float):
        super().__init__(f"{message} (achieved {achieved:.3e})")
        self.achieved = achieved
