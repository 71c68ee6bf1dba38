"""Exception hierarchy for wignerosp."""


class WignerOspError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(WignerOspError, ValueError):
    """An argument lies outside the domain where the quantity is defined."""


class PoleError(DomainError):
    """The gamma function was asked for a value at one of its poles."""


class ConvergenceError(WignerOspError, ArithmeticError):
    """A series or adaptive scheme did not reach its tolerance."""


class NumericalError(WignerOspError, ArithmeticError):
    """A computed value violates a structural expectation (e.g. realness)."""


class DimensionError(WignerOspError, ValueError):
    """Operands have incompatible dimensions."""
