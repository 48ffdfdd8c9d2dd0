"""Exception types raised by photon_pistol."""


class DomainError(ValueError):
    """Input outside the mathematical domain of an operation."""


class AccuracyError(RuntimeError):
    """A numerical integration drifted beyond its accuracy budget."""


class ConsistencyError(RuntimeError):
    """An internal identity that must hold by construction was violated."""
