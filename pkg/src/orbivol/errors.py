"""Exception hierarchy shared by every orbivol module."""


class OrbivolError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(OrbivolError, ValueError):
    """Input outside the mathematical domain of a function."""


class ConvergenceError(OrbivolError):
    """An iteration stopped before meeting its tolerance.

    ``best`` holds the last iterate, ``residual`` its residual.
    """

    def __init__(self, msg, best=None, residual=None):
        super().__init__(msg)
        self.best = best
        self.residual = residual


class DegenerateError(OrbivolError):
    """A shape ratio hit 0, 1 or infinity."""


class InconsistencyError(OrbivolError):
    """Doubly labelled segments disagree (wrong root or branch)."""


class NoGeometricSolutionError(OrbivolError):
    """No candidate root produced a nondegenerate solution."""


class NonHyperbolicError(OrbivolError):
    """The requested orbifold is not hyperbolic."""


class ParseError(OrbivolError):
    def __init__(self, msg, line=None):
        super().__init__(f"line {line}: {msg}" if line is not None else msg)
        self.line = line


class StructuralError(OrbivolError):
    """Diagram incidence data is inconsistent."""


class NonAlternatingError(StructuralError):
    pass


class ContinuationError(OrbivolError):
    """Cone-angle continuation lost the solution path.

    ``last_t`` is the last cone parameter at which Newton converged.
    """

    def __init__(self, msg, last_t):
        super().__init__(msg)
        self.last_t = last_t


class PreconditionError(OrbivolError):
    pass
