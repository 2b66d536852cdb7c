"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain an operation is defined on."""


class ConsistencyError(ArithmeticError):
    """An exact computation produced a value its invariants rule out."""
