"""Exception types shared across the package."""


class HamdecError(Exception):
    """Base class for all package errors."""


class InvalidInput(HamdecError):
    """An argument violates a documented precondition."""


class UnsupportedParameters(HamdecError):
    """The requested (d, m) pair is outside the construction's range."""


class ResourceLimit(HamdecError):
    """An enumeration would exceed the configured step budget.

    ``partial`` may carry whatever report was assembled before the limit hit.
    """

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class MalformedCertificate(HamdecError):
    """A schedule or certificate is structurally incomplete."""


class CertificateFailure(HamdecError):
    """A certificate that should hold by construction failed re-verification."""


class InfeasibleDegrees(HamdecError):
    """A bipartite degree pair admits no 0/1 realization."""


class SchemaError(HamdecError):
    """A file does not match its declared format."""


class InternalError(HamdecError):
    """A situation the construction proofs rule out; indicates a bug."""
