"""Exception types shared across the package."""


class ParseError(ValueError):
    """Malformed circuit or scalar text."""


class ValidationError(ValueError):
    """A document parsed but violates a named invariant."""

    def __init__(self, invariant: str, detail: str = ""):
        super().__init__(f"{invariant}: {detail}" if detail else invariant)
        self.invariant = invariant


class NotAnEigenprojector(ValueError):
    """The operator does not commute with the state as a subsystem eigenprojector must."""


class NotQuantumClassical(ValueError):
    """No complete set of subsystem eigenprojectors exists on the requested subsystem."""


class PromiseViolation(RuntimeError):
    """The circuit is not concordant (or not rationally concordant) at some time step."""

    def __init__(self, message: str, step: int | None = None):
        super().__init__(message)
        self.step = step


class ResourceLimit(RuntimeError):
    """A configured size cap was exceeded."""
