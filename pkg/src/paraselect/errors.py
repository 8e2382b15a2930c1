"""Exception hierarchy.

Every error raised on purpose by the package derives from
:class:`ParaselectError`. The command line maps the four families below to
exit statuses (input 3, certification 2, resource/convergence 4).
"""


class ParaselectError(Exception):
    """Base class for all package errors."""


class InputError(ParaselectError, ValueError):
    """Malformed input or a violated precondition."""


class PreconditionError(InputError):
    """An operation was called outside its domain of validity."""

    def __init__(self, message, vertex=None):
        super().__init__(message)
        self.vertex = vertex


class ContractError(InputError):
    """A structural contract between two objects does not hold."""

    def __init__(self, message, vertex=None):
        super().__init__(message)
        self.vertex = vertex


class CertificationError(ParaselectError):
    """An inequality that should hold was observed to fail."""


class ParaconvexityViolation(CertificationError):
    """The residual bound failed during successive approximation.

    Attributes
    ----------
    iteration : int
        Index ``n + 1`` of the iterate ``f_{n+1}`` that missed the bound.
    vertex : int
        Domain vertex where the worst residual occurred.
    residual, bound : float
        Observed residual ``d(f_{n+1}(x), phi(x))`` and the bound it missed.
    trace : SelectionTrace
        Iterates computed so far, including the offending one.
    """

    def __init__(self, message, iteration, vertex, residual, bound, trace=None):
        super().__init__(message)
        self.iteration = iteration
        self.vertex = vertex
        self.residual = residual
        self.bound = bound
        self.trace = trace


class ResourceError(ParaselectError):
    """A computation exceeded its budget."""

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class NumericalError(ResourceError):
    """An iterative solver did not converge.

    ``best`` holds the best iterate found and ``gap`` its optimality gap.
    """

    def __init__(self, message, best=None, gap=None):
        super().__init__(message, partial=best)
        self.best = best
        self.gap = gap


class NonConvergenceError(ResourceError):
    """Successive approximation ran out of iterations."""

    def __init__(self, message, trace=None):
        super().__init__(message, partial=trace)
        self.trace = trace


class SearchError(ParaselectError):
    """A grid search found no admissible sample."""


class ConstructionError(ParaselectError):
    """A combinatorial construction could not satisfy its invariants."""


class ResolutionError(InputError):
    """Sampling is too coarse to resolve the requested feature."""
