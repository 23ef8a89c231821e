"""Exception types shared across the package."""


class CncsimError(Exception):
    """Base class for package errors."""


class DimensionMismatch(CncsimError, ValueError):
    """Operands live on different qubit counts."""


class DomainError(CncsimError, ValueError):
    """Operation applied outside its domain (e.g. beta on anticommuting pair)."""


class ParseError(CncsimError, ValueError):
    """Malformed textual input (Pauli strings, programs, state specs)."""


class ConstructionError(CncsimError, ValueError):
    """Invalid cnc-set construction; carries the offending pair when known."""

    def __init__(self, message, pair=None):
        super().__init__(message)
        self.pair = pair


class ResourceCapError(CncsimError, RuntimeError):
    """A configured combinatorial or dense-matrix cap was exceeded."""


class InvalidStateError(CncsimError, ValueError):
    """Input does not describe a physical quantum state."""


class SolverError(CncsimError, RuntimeError):
    """LP solver failed to converge or reported an inconsistent status."""
