"""Exception hierarchy shared by all modules."""


class RenyiLabError(Exception):
    """Base class for library errors."""


class InvalidInput(RenyiLabError, ValueError):
    """Malformed input: wrong shapes, non-finite entries, mismatched algebras."""


class DomainError(RenyiLabError, ValueError):
    """Input outside the domain of a function (e.g. log of a singular element)."""


class ParameterError(RenyiLabError, ValueError):
    """Invalid divergence parameters (alpha, z) or limit schedules."""


class NumericalFailure(RenyiLabError, ArithmeticError):
    """An iterative routine did not converge or produced inconsistent output."""


class CrossCheckFailure(RenyiLabError, AssertionError):
    """Two independent evaluation routes disagree beyond tolerance."""
