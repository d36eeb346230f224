from __future__ import annotations


class InvalidArgumentError(ValueError):
    """Raised when an operation receives arguments outside its domain."""


class NumericDomainError(ArithmeticError):
    """Raised when a computed quantity leaves its mathematical range beyond float noise."""
