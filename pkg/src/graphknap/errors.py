"""Exception types shared across the package."""


class GraphKnapError(Exception):
    """Base class for all library errors."""


class InvalidAlphabetError(GraphKnapError, ValueError):
    """Raised when an independence alphabet violates its invariants."""


class WordError(GraphKnapError, ValueError):
    """Raised for malformed words or letters outside the alphabet."""


class NotTransitiveForestError(GraphKnapError, ValueError):
    """Raised when a transitive-forest-only operation meets a general graph."""

    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


class AutomatonError(GraphKnapError, ValueError):
    """Raised for malformed automata or acyclicity violations."""


class BoundError(GraphKnapError, ValueError):
    """Raised when an operation's stated input bound is violated."""


class CancellationError(GraphKnapError, ValueError):
    """Raised for invalid cancellations or unmet cancellation preconditions."""


class EquationError(GraphKnapError, ValueError):
    """Raised for malformed exponent equations."""


class ResourceExhaustedError(GraphKnapError, RuntimeError):
    """Raised when a configured search cap is exceeded before a decision."""


class JsonFormatError(GraphKnapError, ValueError):
    """Raised when an input document does not match its schema."""
