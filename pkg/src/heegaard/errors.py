"""Exception hierarchy shared by all modules."""


class HeegaardError(Exception):
    """Base class for every error raised by this package."""


class ValidationError(HeegaardError):
    """Malformed input: bad letters, out-of-range indices, broken files."""


class DimensionMismatch(HeegaardError):
    """Operands live on surfaces of different genus or have unequal sizes."""


class StructureError(HeegaardError):
    """Input is well-formed but violates a structural invariant."""


class PreconditionError(HeegaardError):
    """An operation was called on state that no longer satisfies its precondition."""


class NotCertifiedError(HeegaardError):
    """A cancellation step was requested without the certificate it requires."""


class MissingDataError(HeegaardError):
    """An embedded arrangement needed for a geometric check is absent."""
