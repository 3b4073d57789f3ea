"""Exception hierarchy shared across the package."""


class WedgewalkError(Exception):
    """Base class for all package-specific errors."""


class SchemaError(WedgewalkError):
    """Profile document does not match the expected JSON structure."""


class NonMonotoneError(WedgewalkError):
    """A profile function decreases somewhere on its range."""


class NegativeValueError(WedgewalkError):
    """A profile function takes a negative value."""


class ZeroDimensionError(WedgewalkError):
    """Profile declares zero constrained coordinates."""


class HorizonExceededError(WedgewalkError):
    """A query needs profile or staircase data past the available range."""


class NotInWedgeError(WedgewalkError):
    """Vertex lies outside the wedge vertex set."""


class OutsideTruncationError(WedgewalkError):
    """Vertex lies outside the finite truncation under consideration."""


class AnchorOutsideTruncationError(WedgewalkError):
    """Flow anchor must lie strictly inside the truncation."""


class NotInTubeError(WedgewalkError):
    """Vertex lies outside the anchored tube region."""


class DomainMismatchError(WedgewalkError):
    """Flow was built for a different staircase or level range."""


class DisconnectedError(WedgewalkError):
    """Source and sink sets are not connected in the graph."""


class SolverFailureError(WedgewalkError):
    """Linear solve did not reach the requested residual."""
