"""Exception hierarchy shared by all modules."""


class ElimError(Exception):
    """Base class for every error raised by elimcert."""


class StructuralError(ElimError, ValueError):
    """Operands live in different rings (field or number of variables)."""


class PreconditionError(ElimError, ValueError):
    """An operation was called outside its documented domain."""


class InconsistentInputError(PreconditionError):
    """The input contradicts itself, e.g. fewer generators than the codimension."""


class ParseError(ElimError, ValueError):
    def __init__(self, message, line=1, column=1):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


class BudgetError(ElimError, RuntimeError):
    """A resource cap of a Groebner computation was exceeded."""


class GenericityError(ElimError, RuntimeError):
    """Random draws kept failing the a-posteriori genericity checks."""


class BoundViolationError(ElimError, RuntimeError):
    """A produced certificate exceeds the degree bound.

    This should never happen on valid input and indicates a bug or an
    unlucky draw that nevertheless passed every genericity check.
    """


class NotMember(ElimError):
    """Raised by ideal_membership when the target is not in the ideal."""

    def __init__(self, remainder):
        super().__init__(f"not an ideal member; remainder {remainder}")
        self.remainder = remainder


class ZeroIdeal(ElimError):
    """The ideal is zero so it has no nonzero element."""
