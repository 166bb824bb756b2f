from typing import Optional


# =====================================================
# BASE ERROR
# =====================================================

class LambdaPError(Exception):
    """
    Root of every error raised by the library.

    The CLI maps each subclass to an exit code through `exit_code`.
    """

    exit_code: int = 1


# =====================================================
# ARITHMETIC
# =====================================================

class NonDivisibleError(LambdaPError, ArithmeticError):
    """Exact division left a genuine remainder."""


class DimensionError(LambdaPError, ValueError):
    """Arity, matrix shape or basis dimension out of range."""

    exit_code = 2


class SingularBlockError(LambdaPError, ArithmeticError):
    """A bidegree block of an operator could not be inverted."""


# =====================================================
# KNOTS
# =====================================================

class EnhancementError(LambdaPError):
    """
    The enhancement system has no solution, or a family of them.
    `dimension` is the null-space dimension for the non-unique case.
    """

    def __init__(self, message: str, dimension: Optional[int] = None):
        super().__init__(message)
        self.dimension = dimension


class InvariantError(LambdaPError):
    """Multi-component closure, non-scalar trace or non-Laurent result."""

    def __init__(self, message: str, deviation: Optional[dict] = None):
        super().__init__(message)
        self.deviation = deviation or {}


class NormalizationError(LambdaPError):
    """Input cannot be symmetrized by a unit monomial."""


class ResourceBudgetError(LambdaPError):
    """Braid operator would exceed the configured basis budget."""

    exit_code = 3


# =====================================================
# CONFIGURATION
# =====================================================

class ConfigurationError(LambdaPError):
    exit_code = 2
