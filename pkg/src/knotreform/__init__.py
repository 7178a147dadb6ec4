"""Exact computation of reformulated link invariants and their integer content."""

from .errors import (
    ConjectureViolation,
    KnotReformError,
    ParseError,
    StructureViolation,
)
from .ring import LaurentQL, RatFn, YSeries

__version__ = "0.1.0"

__all__ = [
    "ConjectureViolation",
    "KnotReformError",
    "LaurentQL",
    "ParseError",
    "RatFn",
    "StructureViolation",
    "YSeries",
    "__version__",
]
