"""Exception hierarchy shared by all modules."""


class RacahError(Exception):
    """Base class for every error raised by this package."""


class PoleError(RacahError, ZeroDivisionError):
    """A denominator (Pochhammer, b-factor, Gamma base) vanished."""


class DimensionError(RacahError, ValueError):
    """Vector lengths or matrix grids do not match."""


class RangeError(RacahError, IndexError):
    """An index or label lies outside its admissible range."""


class BoundaryError(RacahError):
    """A shift left the simplex with a nonzero coefficient."""


class StructureError(RacahError):
    """A residual is not in the span required by an algebra relation."""


class SpectrumMismatch(RacahError):
    """The characteristic polynomial does not factor over the predicted eigenvalues."""

    def __init__(self, message, missing=(), extra_degree=0):
        super().__init__(message)
        self.missing = list(missing)
        self.extra_degree = extra_degree


class SignError(RacahError, ValueError):
    """A weight is not strictly positive, so its square root would not be real."""


class GenericityError(RacahError, ValueError):
    """The parameter set violates the genericity predicate."""
