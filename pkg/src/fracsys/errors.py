"""Exception hierarchy shared by all fracsys modules."""


class FracsysError(Exception):
    """Base class for all errors raised by this package."""


class InvalidArgumentError(FracsysError, ValueError):
    """Non-finite or out-of-domain input."""


class InvalidOrderError(FracsysError, ValueError):
    """Fractional order outside the admissible range of an operation."""


class UnsupportedOrderError(FracsysError, ValueError):
    """Derivative order beyond the supported cap."""


class AccuracyLossError(FracsysError, ArithmeticError):
    """Requested accuracy is unreachable in the current regime.

    Carries ``estimate``, an upper bound on the achievable absolute error
    (may be ``inf`` when the value itself overflows double precision).
    """

    def __init__(self, message, estimate=float("inf")):
        super().__init__(message)
        self.estimate = estimate


class IllConditionedDecompositionError(FracsysError, ArithmeticError):
    """Jordan decomposition refused; use the Laplace or Adams oracles instead."""


class SeriesDivergenceError(FracsysError, ArithmeticError):
    """A truncated series did not converge within the term cap."""


class IncompatibleGridsError(FracsysError, ValueError):
    """Two sampled functions live on different grids."""


class InaccurateTransformError(FracsysError, ArithmeticError):
    """Numerical Laplace transform tail estimate above tolerance."""


class TruncationLimitError(FracsysError, MemoryError):
    """Sparse exponent-polynomial expansion exceeded the hard term cap."""


class InternalConsistencyError(FracsysError, AssertionError):
    """A construction invariant (e.g. nonnegative integral order) failed."""


class NodeCollisionError(FracsysError, ArithmeticError):
    """Resolvent singular at an inversion-contour node."""


class WrongStructureError(FracsysError, ValueError):
    """Matrix does not have the structure a specialised solver requires."""


class RequiresRationalOrdersError(FracsysError, ValueError):
    """Order reduction needs exact rational orders."""


class SingularSymbolError(FracsysError, ArithmeticError):
    """Spatial symbol singular at a frequency outside the exclusion set."""

    def __init__(self, message, frequency=None):
        super().__init__(message)
        self.frequency = frequency


class InvalidForcingError(FracsysError, ValueError):
    """Forcing term not finite on the requested grid."""


class BlowUpError(FracsysError, ArithmeticError):
    """Time stepper produced a non-finite state."""

    def __init__(self, message, step=None):
        super().__init__(message)
        self.step = step


class ConfigError(FracsysError, ValueError):
    """Run-configuration file failed to parse or validate."""
