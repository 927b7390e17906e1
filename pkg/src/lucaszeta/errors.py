"""Exception and warning types raised across the package."""


class LucasZetaError(Exception):
    """Base class for all package errors."""


class DomainError(LucasZetaError, ValueError):
    """An argument lies outside the domain of the operation."""


class PoleError(DomainError):
    """Evaluation requested at (or numerically at) a pole."""


class NearPoleError(PoleError):
    """Evaluation point is closer than the configured guard to a pole."""


class ParameterError(DomainError):
    """(P, Q) violate the admissibility conditions; ``clause`` names the failed one."""

    def __init__(self, clause: str, message: str):
        super().__init__(message)
        self.clause = clause


class SequenceOverflowError(LucasZetaError, OverflowError):
    """U_n or V_n is not representable as a finite float."""


class ConvergenceError(LucasZetaError, ArithmeticError):
    """A series or refinement loop did not reach its tolerance."""


class QuadratureError(ConvergenceError):
    """Quadrature could not certify the requested tolerance.

    The best available estimate is kept on ``value`` / ``error_estimate``.
    """

    def __init__(self, message: str, value: complex, error_estimate: float):
        super().__init__(message)
        self.value = value
        self.error_estimate = error_estimate


class HeuristicRatioWarning(UserWarning):
    """Pole classification relies on a floating-point rationality guess."""
