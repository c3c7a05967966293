"""Exception types shared across the package."""


class ParameterError(ValueError):
    """An argument violates a documented precondition."""


class NumericalError(RuntimeError):
    """A numerical routine could not meet its accuracy contract."""


class ConvergenceError(NumericalError):
    """Inverse iteration exhausted its budget for some eigenvector.

    The failing eigenvector index is kept on the exception so callers can
    report exactly which eigenpair broke.
    """

    def __init__(self, message: str, index: int):
        super().__init__(f"{message} (eigenvector index {index})")
        self.index = index


class DegenerateProjectionError(NumericalError):
    """The projected vector has no positive entry, so clip-normalize is undefined."""
