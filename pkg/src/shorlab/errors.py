"""Exception types shared across shorlab."""


class ShorLabError(Exception):
    """Base class for all shorlab errors."""


class DomainError(ShorLabError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class ValidationError(ShorLabError, ValueError):
    """A circuit, gate or configuration is malformed."""


class UnsupportedGateError(ShorLabError, TypeError):
    """A gate kind is not accepted by the operation it was passed to."""


class CapacityError(ShorLabError):
    """A resource budget (memory, gate count) would be exceeded."""


class NotApplicableError(ShorLabError):
    """The circuit exceeds the configured qubit-limit policy."""

    def __init__(self, qubits: int, limit: int):
        self.qubits = qubits
        self.limit = limit
        super().__init__(f"not applicable: {qubits} qubits > limit {limit}")
