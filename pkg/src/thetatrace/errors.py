"""Exception hierarchy shared by all thetatrace modules."""


class ThetaTraceError(Exception):
    """Base class for every error raised by this package."""


class PoleError(ThetaTraceError, ZeroDivisionError):
    """Evaluation requested at a pole of a meromorphic function."""


class NonConvergence(ThetaTraceError, ArithmeticError):
    """A quadrature or iteration failed to reach its tolerance."""


class BudgetExceeded(ThetaTraceError):
    """No admissible truncation exists within the term cap."""


class PreconditionError(ThetaTraceError, ValueError):
    """An argument violates an operation's documented precondition."""


class DomainError(PreconditionError):
    """Argument lies outside the region where the integral converges."""


class StepTooLarge(PreconditionError):
    pass


class SelfDualRequired(PreconditionError):
    pass


class MonotonicityError(PreconditionError):
    pass


class SizeError(PreconditionError):
    pass


class FitError(ThetaTraceError):
    """Regression inputs are degenerate."""


class BoundaryTooClose(ThetaTraceError):
    """Contour passes too close to a zero or pole."""


class UnwrapFailure(ThetaTraceError):
    pass


class NoBracket(PreconditionError):
    pass


class ConfigError(ThetaTraceError, ValueError):
    pass
