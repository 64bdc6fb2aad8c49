"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the documented contract of an operation."""


class SpecialFunctionOverflow(OverflowError):
    """A special-function value exceeds the representable double range."""


class ResonanceError(DomainError):
    """A cavity Green function was requested too close to a cavity pole."""


class ToleranceNotMet(ArithmeticError):
    """A series or quadrature could not reach the requested tolerance within its budget."""


class ExtrapolationWarning(RuntimeWarning):
    """Successive extrapolants moved apart instead of converging."""
