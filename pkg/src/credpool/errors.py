"""Exception hierarchy shared across the package."""


class CredpoolError(Exception):
    """Base class for every error raised by credpool."""


class InvalidAgenda(CredpoolError, ValueError):
    pass


class DegenerateAgenda(InvalidAgenda):
    """Two worlds share a truth-table column."""


class InvalidWorld(CredpoolError, IndexError):
    pass


class ShapeError(CredpoolError, ValueError):
    pass


class InvalidCredence(CredpoolError, ValueError):
    pass


class InvalidWeights(CredpoolError, ValueError):
    pass


class RangeError(CredpoolError, ValueError):
    pass


class DegenerateCredence(CredpoolError, ValueError):
    pass


class DegenerateProfile(CredpoolError, ValueError):
    pass


class PreconditionError(CredpoolError, ValueError):
    pass


class ScaleError(CredpoolError, ValueError):
    pass


class GeneralNormalizationError(CredpoolError):
    """Geometric pooling was asked to normalize on an agenda that is not a partition.

    Normalizing weighted geometric averages is only defined cell-by-cell over a
    partition. Once a disjunction such as ``X1 v X2`` sits on the agenda, the
    normalized average for the disjunction is not the sum of the normalized
    averages of its disjuncts, and there is no other normalization to fall back
    on. Use the fine-grained partition route (pool the world distributions) or
    the GKL coherent approximation instead.
    """

    def __init__(self, message=None):
        super().__init__(message or (
            "geometric pooling cannot be normalized on a non-partition agenda: "
            "the normalized geometric average for a disjunction is not the sum of "
            "the normalized averages for its disjuncts"
        ))


class SolverError(CredpoolError, RuntimeError):
    """A numeric solve failed; ``best`` carries the best iterate if any."""

    def __init__(self, message, best=None, diagnostics=None):
        super().__init__(message)
        self.best = best
        self.diagnostics = dict(diagnostics or {})
