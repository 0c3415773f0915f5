"""Exception hierarchy shared by all kmdecomp modules."""


class KMDecompError(Exception):
    """Base class for every error raised by kmdecomp."""


# cartan-data
class CartanError(KMDecompError, ValueError):
    pass


class NonSymmetric(CartanError):
    pass


class BadDiagonal(CartanError):
    pass


class PositiveOffDiagonal(CartanError):
    pass


class UnknownLevi(KMDecompError, KeyError):
    pass


class SearchBoundExceeded(KMDecompError):
    pass


# laurent-ring
class DomainError(KMDecompError, ValueError):
    pass


class Inconsistent(KMDecompError):
    """A linear system has no solution."""


# crystals and paths
class DatumMismatch(KMDecompError, ValueError):
    pass


class NotDominant(KMDecompError, ValueError):
    pass


class IncompleteSlice(KMDecompError):
    """A multiplicity was requested for a weight slice outside the generated ball."""


# decomposition engines
class EngineDisagreement(KMDecompError):
    def __init__(self, message, diffs=None):
        super().__init__(message)
        self.diffs = diffs or {}


class FiniteTypeOnly(KMDecompError):
    pass


# algebraic layer
class DepthTooSmall(KMDecompError):
    pass


class RankUnsupported(KMDecompError):
    pass


class WeightOutOfRange(KMDecompError):
    pass


class SingularSystem(KMDecompError):
    pass


class NotUnitriangular(KMDecompError):
    pass


class LatticeViolation(KMDecompError):
    pass
