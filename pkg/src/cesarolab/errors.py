"""Exception hierarchy shared by every module."""

from __future__ import annotations


class CesaroLabError(Exception):
    """Base class for all errors raised by the package."""


class ParameterError(CesaroLabError, ValueError):
    """An argument violates a documented precondition."""


class PoleError(ParameterError):
    """A Gamma-type function was evaluated at one of its poles."""


class DomainError(ParameterError):
    """A function was evaluated outside its domain."""


class UnsupportedFunction(CesaroLabError, TypeError):
    """No rule (closed form or numeric) exists for this input."""


class ConvergenceError(CesaroLabError, ArithmeticError):
    """A numerical procedure did not reach its tolerance."""


class TailError(ConvergenceError):
    """The truncated tail of a semi-infinite integral is too large."""


class DivergenceWarning(RuntimeWarning):
    """Emitted when a definitional value hides a divergent representation."""
