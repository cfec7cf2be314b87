"""Exact vertex and facet enumeration by reverse search and double description."""

from .errors import (
    ArithmeticOverflow,
    EnumerationTimeout,
    InfeasibleError,
    InvariantViolation,
    ParseError,
    PolyenumError,
    ResourceCapError,
    UnboundedError,
    ValidationError,
)
from .exact import ArithmeticMode
from .polyio import Representation, parse, serialize, validate
from .revsearch import Budget, EnumerationResult, solve
from .doubledesc import InsertionOrder, dd_enumerate
from .parjobs import ParallelParams, manager_loop
from .shapes import ubt_bound

__version__ = "0.1.0"

__all__ = [
    "ArithmeticMode",
    "ArithmeticOverflow",
    "Budget",
    "EnumerationResult",
    "EnumerationTimeout",
    "InfeasibleError",
    "InsertionOrder",
    "InvariantViolation",
    "ParallelParams",
    "ParseError",
    "PolyenumError",
    "Representation",
    "ResourceCapError",
    "UnboundedError",
    "ValidationError",
    "dd_enumerate",
    "manager_loop",
    "parse",
    "serialize",
    "solve",
    "ubt_bound",
    "validate",
]
