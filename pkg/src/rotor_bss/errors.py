"""Exception types shared across the package."""


class ValidationError(ValueError):
    """Input or configuration violates a documented precondition."""


class DegenerateInputError(ArithmeticError):
    """The data make the separation problem ill-posed (e.g. singular matrices)."""


class ConvergenceError(ArithmeticError):
    """An iterative numerical routine did not reach its tolerance."""

    def __init__(self, message, residual):
        super().__init__(f"{message} (residual={residual:.3e})")
        self.residual = residual
