"""Call-by-name, call-by-value and computational modal lambda calculi for IK."""

from .parsing import ParseError, parse, parse_context, parse_type, show
from .syntax import (
    Calculus,
    alpha_eq,
    free_vars,
    show_type,
    substitute,
)

__all__ = [
    "Calculus",
    "ParseError",
    "alpha_eq",
    "free_vars",
    "parse",
    "parse_context",
    "parse_type",
    "show",
    "show_type",
    "substitute",
]
