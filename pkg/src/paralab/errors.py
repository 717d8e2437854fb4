class ParalabError(Exception):
    """Base class for all errors raised by the package."""


class InputError(ParalabError, ValueError):
    """Malformed or dangling input (distinct from a law violation)."""


class UnsupportedExpression(InputError):
    pass


class ResourceError(ParalabError):
    """An enumeration, step, or size budget was exceeded."""


class PreconditionError(ParalabError):
    pass


class NotParanaturalError(ParalabError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness
