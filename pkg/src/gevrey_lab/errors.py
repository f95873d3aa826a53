"""Exception and warning types shared across the package."""


class GevreyLabError(Exception):
    """Base class for all package errors."""


class DomainError(GevreyLabError, ValueError):
    """An operation was applied outside its mathematical domain."""


class NormalizationUndefined(GevreyLabError, ValueError):
    """Time rescaling cannot normalize the damping coefficient (alpha = 1/2, c != 1)."""


class InsufficientData(GevreyLabError, ValueError):
    pass


class SpecError(GevreyLabError, ValueError):
    """Counterexample parameters violate the construction's hypotheses."""


class SupportError(GevreyLabError, ValueError):
    pass


class QuadratureFailure(GevreyLabError, RuntimeError):
    pass


class NumericalGuard(GevreyLabError, RuntimeError):
    """Base for guards that protect numerical results from silent garbage."""


class TruncationError(NumericalGuard):
    """Too few modes to resolve the requested powers."""


class CancellationError(NumericalGuard):
    """A signed sum lost all significant digits and the result was required."""


class CancellationWarning(UserWarning):
    """A signed sum cancelled below the reliability threshold."""
