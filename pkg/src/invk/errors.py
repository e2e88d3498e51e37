"""Exception types shared across the package."""


class InvkError(Exception):
    """Base class for errors raised by this package."""


class ParseError(InvkError, ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


class NotInvariantAlgebra(InvkError, ValueError):
    pass


class DegreeCapExceeded(InvkError, ValueError):
    pass


class StructureError(InvkError, ValueError):
    """Structure constants fail the Lie or Leibniz axioms."""


class ZeroParameterError(InvkError, ValueError):
    """The bracket scalar k is zero where a non-zero k is required."""


class PBWDefect(InvkError):
    """The bounded-degree normal-form certificate failed."""

    def __init__(self, message: str, witness=None, certificate=None):
        super().__init__(message)
        self.witness = witness
        self.certificate = certificate


class WellDefinednessError(InvkError):
    """A structure map does not vanish on a defining relation."""

    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness
