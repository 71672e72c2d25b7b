"""Exact graded homological algebra for twisted Morse and bulk-deformed Floer data."""
from .errors import (ChernflowError, InfiniteBasisError, PreconditionError,
                     UnsupportedRelationError, ValidationError)
from .linalg import BACKEND

__version__ = "0.1.0"

__all__ = ["BACKEND", "ChernflowError", "InfiniteBasisError", "PreconditionError",
           "UnsupportedRelationError", "ValidationError", "__version__"]
