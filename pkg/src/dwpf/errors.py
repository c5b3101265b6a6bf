"""Exception types shared across the package."""


class DWError(Exception):
    """Base class for every error this package raises deliberately."""


class SingularArgument(DWError):
    """A bracket that must be nonzero vanished within tolerance."""


class SingularNormalization(DWError):
    """A fusion normalization divisor vanished and no finite limit could be
    extracted."""


class DegenerateRapidities(DWError):
    """A rapidity pair makes a formula denominator vanish.

    ``pair`` names the offending variables, e.g. ``("x[0]", "x[2]")``.
    """

    def __init__(self, message, pair=None):
        super().__init__(message)
        self.pair = pair


class UnreachableSigma(DWError):
    """Requested total boundary spin is not achievable on the boundary."""


class NotInTable(DWError):
    """Vertex is admissible but not covered by the closed-form spin-1 table."""


class BudgetExceeded(DWError):
    """Exhaustive search exceeded its node budget."""


class GenericityExhausted(DWError):
    """Too many consecutive random draws were rejected as non-generic."""
