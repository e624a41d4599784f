"""Exception types shared across the package."""


class SpecificationError(ValueError):
    """A norm description violates its invariants."""


class ParseError(ValueError):
    """A norm document could not be decoded."""

    def __init__(self, message, line=None, col=None):
        if line is not None:
            message = f"line {line}, column {col}: {message}"
        super().__init__(message)
        self.line = line
        self.col = col


class DomainError(ValueError):
    """An operation was called outside the domain where it is defined."""


class InputError(KeyError):
    """A relation check is missing one of the estimates it needs."""

    def __str__(self):
        return str(self.args[0]) if self.args else ""


class ConvergenceError(RuntimeError):
    """A root or extremum search did not reach its tolerance."""

    def __init__(self, message, best_residual=None, theta=None):
        super().__init__(message)
        self.best_residual = best_residual
        self.theta = theta


class BoundViolation(ArithmeticError):
    """An estimate escaped a range that holds for every normed plane."""
