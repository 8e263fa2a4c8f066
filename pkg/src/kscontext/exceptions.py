"""Exception hierarchy.

Everything raised on bad domain input derives from :class:`KSError`, so the
CLI can separate domain failures (exit 1) from usage errors (exit 2).
"""


class KSError(Exception):
    """Base class for all domain errors raised by kscontext."""


class DimensionError(KSError, ValueError):
    """Operands act on different numbers of qubits."""


class NonCommutingError(KSError, ValueError):
    """Observables that must be jointly measurable do not commute."""

    def __init__(self, message, pair=None):
        super().__init__(message)
        self.pair = pair


class NotHermitianError(KSError, ValueError):
    """A product that must be an observable carries a phase of +-i."""


class NotEigenstateError(KSError, ValueError):
    """A state is not an eigenvector of a context product with eigenvalue +-1."""

    def __init__(self, message, residuals=None, context=None):
        super().__init__(message)
        self.residuals = residuals
        self.context = context


class CapacityError(KSError, ValueError):
    """Problem size exceeds a hard limit of an exhaustive routine."""


class MissingSettingError(KSError, KeyError):
    """A data set lacks a measurement setting required by a computation."""

    def __str__(self):
        return str(self.args[0]) if self.args else ""


class ModelFileError(KSError, ValueError):
    """A model or data file is malformed; the message carries its location."""
