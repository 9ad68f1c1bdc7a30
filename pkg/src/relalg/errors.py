"""Exception hierarchy shared by every module of the workbench."""


class RelAlgError(Exception):
    """Base class for all workbench errors."""


class InvalidStructure(RelAlgError, ValueError):
    """An atom structure violates one of the atom-level invariants.

    ``invariant`` names the violated condition and ``witness`` is a tuple of
    atom indices showing the failure.
    """

    def __init__(self, invariant, message, witness=()):
        super().__init__(f"{invariant}: {message}")
        self.invariant = invariant
        self.witness = tuple(witness)


class AlgebraMismatch(RelAlgError, ValueError):
    pass


class BaseMismatch(RelAlgError, ValueError):
    pass


class NotEquivalence(RelAlgError, ValueError):
    pass


class SizeLimit(RelAlgError, ValueError):
    pass


class NotClosed(RelAlgError, ValueError):
    def __init__(self, message, witness=()):
        super().__init__(message)
        self.witness = tuple(witness)


class ImproperIdeal(RelAlgError, ValueError):
    pass


class KernelNotMaximal(RelAlgError, ValueError):
    pass


class NotPrime(RelAlgError, ValueError):
    pass


class QTooSmall(RelAlgError, ValueError):
    pass


class BadParameters(RelAlgError, ValueError):
    pass


class NotSimple(RelAlgError, ValueError):
    pass


class InvalidCertificate(RelAlgError, ValueError):
    pass


class FormatError(RelAlgError, ValueError):
    """A ``.ra``/``.rep``/literal input could not be read."""

    def __init__(self, message, line=None):
        where = f"line {line}: " if line is not None else ""
        super().__init__(where + message)
        self.line = line


class ParseError(RelAlgError, ValueError):
    def __init__(self, message, position):
        super().__init__(f"{message} at position {position}")
        self.position = position


class UnboundVariable(RelAlgError, KeyError):
    def __str__(self):
        return f"unbound variable {self.args[0]!r}"


class SearchSpaceTooLarge(RelAlgError, ValueError):
    def __init__(self, required, cap):
        super().__init__(f"{required} assignments needed, cap is {cap}")
        self.required = required
        self.cap = cap
