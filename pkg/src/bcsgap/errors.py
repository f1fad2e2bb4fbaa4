"""Exception hierarchy.

Every error raised by the package derives from :class:`BCSGapError`, so
callers (and the command-line front end) can map whole families of failures
onto exit statuses.
"""


class BCSGapError(Exception):
    """Base class for all package errors."""


class ConfigurationError(BCSGapError, ValueError):
    """Invalid user-supplied parameters or configuration."""


class NonPositiveInput(ConfigurationError):
    pass


class CouplingOrder(ConfigurationError):
    """Raised when the lower coupling exceeds the upper one."""


class OutOfDomain(BCSGapError, ValueError):
    """A point outside ``[0, hbar_omega_d]**2`` was requested."""


class BoundViolation(BCSGapError):
    """The potential leaves the band ``[u1, u2]``.

    Attributes ``x``, ``xi`` and ``value`` locate the worst offender.
    """

    def __init__(self, message, x=None, xi=None, value=None):
        super().__init__(message)
        self.x = x
        self.xi = xi
        self.value = value


class OutOfRange(BCSGapError, ValueError):
    pass


class UndefinedLimit(BCSGapError, ValueError):
    """The kernel is undefined at xi = delta = t = 0."""


class NumericalFailure(BCSGapError):
    """Base for failures of an iterative numerical method."""


class MaxSubdivisions(NumericalFailure):
    pass


class BracketFailure(NumericalFailure):
    pass


class NoConvergence(NumericalFailure):
    """Fixed-point iteration ran out of iterations.

    The partial :class:`~bcsgap.solver.IterationTrace` is attached as
    ``trace``; ``t`` is the offending temperature when known.
    """

    def __init__(self, message, trace=None, t=None):
        super().__init__(message)
        self.trace = trace
        self.t = t


class InfeasibleCoupling(BCSGapError):
    """``u2 * a >= 1``: the Lipschitz constant gamma does not exist.

    The partially filled :class:`~bcsgap.bounds.BoundConstants` is attached
    as ``constants``.
    """

    def __init__(self, message, constants=None):
        super().__init__(message)
        self.constants = constants


class DegenerateBand(BCSGapError):
    """Lower and upper gap curves coincide, so the band has no interior."""


class SurfaceInvariantError(NumericalFailure):
    """A solved surface breaks the band or monotonicity invariants."""
