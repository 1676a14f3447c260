"""Exception hierarchy shared by all modules.

The CLI maps :class:`DomainError` (and its subclasses) to exit code 2 and
:class:`NumericalError` to exit code 3.
"""


class LrdcpError(Exception):
    """Base class for all errors raised by :mod:`lrdcp`."""


class DomainError(LrdcpError, ValueError):
    """An argument lies outside the domain of the operation."""


class IngestionError(DomainError):
    """Input data could not be parsed."""


class UnsupportedInputError(DomainError):
    """The input is well formed but the requested computation is not supported for it."""


class NumericalError(LrdcpError, ArithmeticError):
    """A numerical procedure failed (non-convergence, inconsistent input, ...)."""


class DivergenceError(NumericalError):
    """An integral grows without bound under refinement."""


class EmbeddingError(NumericalError):
    """Circulant embedding produced a significantly negative eigenvalue."""
