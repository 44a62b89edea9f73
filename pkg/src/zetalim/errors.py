"""Exception hierarchy shared by all zetalim modules."""


class ZetalimError(Exception):
    """Base class for every library error."""


class InputError(ZetalimError):
    """Malformed or unparseable input description."""


class BudgetExceeded(ZetalimError):
    """Exhaustive enumeration would exceed the configured budget."""


class BadModel(ZetalimError):
    """Curve model is invalid (non-squarefree f, genus mismatch, bad characteristic)."""


class InconsistentData(ZetalimError):
    """Counts or coefficients are not those of a curve."""


class NonIntegralInversion(InconsistentData):
    pass


class NegativeCount(InconsistentData):
    pass


class NonIntegralCoefficient(InconsistentData):
    pass


class InsufficientDepth(ZetalimError):
    """Not enough point counts / place counts for the requested operation."""


DepthError = InsufficientDepth


class NoConvergence(ZetalimError):
    pass


class PoleProximity(ZetalimError):
    """Evaluation point too close to a pole; ``term`` names the offending term."""

    def __init__(self, message, term=None):
        super().__init__(message)
        self.term = term


class PoleAtS(ZetalimError):
    pass


class DomainError(ZetalimError, ValueError):
    pass


class TooFewMembers(ZetalimError):
    pass


class NoConvergenceAtHalf(ZetalimError):
    pass


class InfeasibleTargets(ZetalimError):
    pass


class NotFundamental(ZetalimError, ValueError):
    pass


class OverflowBudget(ZetalimError):
    pass


class NearPole(ZetalimError):
    pass


class NearZeroOfZeta(ZetalimError):
    pass


class QuadratureFailure(ZetalimError):
    pass
