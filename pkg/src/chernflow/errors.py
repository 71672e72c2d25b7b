"""Exception taxonomy.

``ValidationError`` marks malformed input (CLI exit 1); ``PreconditionError``
marks well-formed input that fails a mathematical hypothesis such as a Stokes
identity or d^2 = 0 (CLI exit 2).
"""


class ChernflowError(Exception):
    pass


class ValidationError(ChernflowError, ValueError):
    pass


class UnsupportedRelationError(ValidationError):
    pass


class InfiniteBasisError(ValidationError):
    pass


class PreconditionError(ChernflowError):
    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness
