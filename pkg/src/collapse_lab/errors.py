"""Exception types raised across the package."""


class CollapseLabError(Exception):
    """Base class for all package errors."""


class InvalidParameter(CollapseLabError, ValueError):
    """An argument is outside the documented domain."""


class DegenerateMetric(CollapseLabError, ArithmeticError):
    """A metric is too anisotropic for double-precision arithmetic, or an
    enumeration exceeded its node budget."""


class NotInjective(CollapseLabError):
    """The Euler map has a nontrivial kernel where an injective one is required."""


class NotApplicable(CollapseLabError):
    """The requested bound has no meaning for the given data (e.g. a zero map)."""
