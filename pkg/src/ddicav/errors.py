"""Exception hierarchy shared by all solution layers."""


class DdicavError(Exception):
    pass


class ConfigError(DdicavError, ValueError):
    """Bad parameters, config file or CLI arguments."""


class NumericalError(DdicavError, ArithmeticError):
    """Base for numerical failures. ``point`` tags the offending sweep value."""

    def __init__(self, message, point=None):
        super().__init__(message)
        self.point = point

    def __str__(self):
        msg = super().__str__()
        if self.point is not None:
            msg = f"{msg} (at sweep point {self.point!r})"
        return msg


class SingularParameterError(NumericalError):
    """A resonance denominator vanished exactly (only possible without loss)."""


class RootPolishError(NumericalError):
    pass


class MarginalStabilityError(NumericalError):
    pass


class NonConvergenceError(NumericalError):
    def __init__(self, message, point=None, rhs_norm=None, state=None):
        super().__init__(message, point)
        self.rhs_norm = rhs_norm
        self.state = state


class DegenerateNullSpaceError(NumericalError):
    pass
