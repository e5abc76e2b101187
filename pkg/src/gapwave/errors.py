"""Exception types shared across the package.

Every deliberately raised error derives from GapwaveError so callers can
distinguish library refusals from genuine bugs.
"""


class GapwaveError(Exception):
    """Base class for all errors raised on purpose by this package."""


class InvalidInputError(GapwaveError, ValueError):
    """A precondition on operation inputs was violated."""


class OutOfRangeError(GapwaveError, ValueError):
    """A query point lies outside the sampled window."""


class NearZeroOnCircleError(GapwaveError, ValueError):
    """A polynomial came too close to 0 on the unit circle for winding counts."""


class NeedsHeatingError(GapwaveError, RuntimeError):
    """A real zero was not simple; smooth the signal before phase tracking."""


class NeedsRefinementError(GapwaveError, RuntimeError):
    """No tested time slice had all-simple zeros; refine the time grid."""


class NoSplitError(GapwaveError, RuntimeError):
    """The requested tail smallness is not achievable inside the window."""


class DiagnosticError(GapwaveError, RuntimeError):
    """A numerical subroutine failed to converge; details in the message."""
