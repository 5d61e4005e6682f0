"""Exception hierarchy shared by all modules.

Each class carries the CLI exit code it maps to.
"""


class JacobiHarmError(Exception):
    exit_code = 3


class InvalidParameterError(JacobiHarmError, ValueError):
    """Inputs violate a documented precondition."""

    exit_code = 2


class PoleError(InvalidParameterError):
    """A gamma-type function was asked for a value at one of its poles."""


class NumericalError(JacobiHarmError):
    """A numerical procedure failed to meet its tolerance."""

    exit_code = 3


class ConvergenceError(NumericalError):
    pass


class IntegrationError(NumericalError):
    pass


class TailMassError(NumericalError):
    """The integrand does not decay enough inside the truncated range."""


class InterpolationError(NumericalError):
    """A sampled profile is too coarse for the requested quadrature."""


class SingularPointError(NumericalError):
    pass


class DivergentMomentError(NumericalError):
    """A spectral tail cannot pay for the requested polynomial weight."""


class AdmissibilityError(JacobiHarmError):
    """An input is outside the admissible class for the requested construction."""

    exit_code = 4


class BudgetError(AdmissibilityError):
    pass


class CaseViolationError(AdmissibilityError):
    pass


class UnsupportedTailError(AdmissibilityError):
    pass
