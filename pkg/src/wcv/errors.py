"""Exception types shared across the package."""


class WcvError(Exception):
    """Base class for all package errors."""


class InvalidInput(WcvError):
    """Input fails a structural precondition (non-finite, malformed, ...)."""


class DimensionMismatch(WcvError):
    """Operands live in different ambient or projected dimensions."""


class NotPositiveSemidefinite(WcvError):
    """Matrix has an eigenvalue below the PSD tolerance."""


class SingularMatrix(WcvError):
    """Matrix is numerically singular and no ridge was supplied."""


class RankDeficient(WcvError):
    """Columns are linearly dependent to working tolerance."""


class MarginalMismatch(WcvError):
    """Transport marginals are infeasible or a coupling violates them."""


class SingletonClass(WcvError):
    """A class has a single member, leaving a within-class average undefined."""


class EmptyPairSet(WcvError):
    """Pair selection produced no between-class or no within-class pairs."""


class DegenerateWithinVariation(WcvError):
    """Within-class variation is zero; the variation ratio is undefined."""


class EmptyClass(WcvError):
    """A class has no training samples."""


class EmptyCloud(WcvError):
    """A data cloud has no points."""


class IdMismatch(WcvError):
    """Instance ids or labels disagree across representations."""
