"""Exception types raised by a2gsim."""


class A2GError(ValueError):
    """Base class for all a2gsim errors."""


class DomainError(A2GError):
    """An input lies outside the domain of an operation."""


class PatternRangeError(DomainError):
    """Lookup angle falls outside the sampled range of a tabulated pattern."""


class PatternFormatError(A2GError):
    """A radiation pattern file or sample set is malformed."""


class TraceFormatError(A2GError):
    """An RSS trace file is malformed."""


class EmptyTraceError(A2GError):
    """A trace holds no finite samples."""


class NoMaximumError(A2GError):
    """RSS is zero everywhere over a search range."""


class UnsupportedCombinationError(A2GError):
    """A configuration/pattern combination the model does not define."""


class ComparisonError(A2GError):
    """Two traces cannot be compared."""
